// SPDX-License-Identifier: Apache-2.0
#include "cointoss/outcome.hpp"

namespace cointoss {

std::optional<Outcome> parse_outcome(std::string_view text) noexcept {
    if (text == "0") return Outcome::Zero;
    if (text == "1") return Outcome::One;
    if (text == "abort" || text == "bot" || text == "⊥") return Outcome::Abort;
    return std::nullopt;
}

}  // namespace cointoss
