// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace cointoss {

/// A party's verdict at the end of a toss: a coin value or abort (⊥).
enum class Outcome : std::uint8_t { Zero, One, Abort };

inline constexpr Outcome kAllOutcomes[] = {Outcome::Zero, Outcome::One, Outcome::Abort};

/// Single classical bit exchanged in the protocol.
enum class Bit : std::uint8_t { Zero = 0, One = 1 };

constexpr Bit operator^(Bit lhs, Bit rhs) noexcept {
    return static_cast<Bit>(static_cast<std::uint8_t>(lhs) ^ static_cast<std::uint8_t>(rhs));
}

constexpr Outcome to_outcome(Bit bit) noexcept {
    return bit == Bit::Zero ? Outcome::Zero : Outcome::One;
}

/// Coin value of a non-abort outcome; nullopt for Abort.
constexpr std::optional<Bit> to_bit(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Zero: return Bit::Zero;
        case Outcome::One: return Bit::One;
        case Outcome::Abort: break;
    }
    return std::nullopt;
}

constexpr int index_of(Outcome outcome) noexcept { return static_cast<int>(outcome); }

constexpr std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Zero: return "0";
        case Outcome::One: return "1";
        case Outcome::Abort: return "abort";
    }
    return "?";
}

/// Accepts "0", "1", "abort", "bot" or "⊥".
std::optional<Outcome> parse_outcome(std::string_view text) noexcept;

}  // namespace cointoss
