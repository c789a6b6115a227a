// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cointoss/bounds.hpp"
#include "cointoss/protocol.hpp"

namespace cointoss {

/// Which probability a batch estimates.
struct Target {
    enum class Kind : std::uint8_t {
        BobOutputs,    ///< Bob's output equals `value` (cheating Alice's goal)
        AliceOutputs,  ///< Alice's output equals `value` (cheating Bob's goal)
        BothAbort,     ///< both output abort (honest QBER)
    };
    Kind kind = Kind::BothAbort;
    Outcome value = Outcome::Abort;

    [[nodiscard]] bool matches(Outcome alice_output, Outcome bob_output) const noexcept;

    static Target both_abort() noexcept { return {Kind::BothAbort, Outcome::Abort}; }
    static Target bob_outputs(Outcome o) noexcept { return {Kind::BobOutputs, o}; }
    static Target alice_outputs(Outcome o) noexcept { return {Kind::AliceOutputs, o}; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Wilson score interval for `successes` out of `n` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

struct BatchResult {
    std::uint64_t n_sessions = 0;
    /// counts[alice_output][bob_output], indexed by index_of(Outcome).
    std::array<std::array<std::uint64_t, 3>, 3> counts{};
    std::uint64_t hits = 0;
    double estimate = 0.0;
    double std_error = 0.0;  ///< sqrt(p (1 - p) / n) at the point estimate
    Interval ci95;

    [[nodiscard]] std::uint64_t count(Outcome alice_output, Outcome bob_output) const noexcept {
        return counts[index_of(alice_output)][index_of(bob_output)];
    }
    /// Sessions in which Bob output `o`.
    [[nodiscard]] std::uint64_t bob_count(Outcome o) const noexcept;
    [[nodiscard]] std::uint64_t alice_count(Outcome o) const noexcept;

    friend bool operator==(const BatchResult&, const BatchResult&) = default;
};

struct BatchOptions {
    std::size_t workers = 1;  ///< 0 means hardware concurrency
};

/// Runs n independent sessions; session i draws its streams from
/// (master_seed, i), so the result does not depend on the worker count.
/// Throws std::invalid_argument for n == 0.
BatchResult run_batch(const AliceStrategy& alice, const BobStrategy& bob,
                      const ExperimentParams& params, std::uint64_t n, std::uint64_t master_seed,
                      Target target, BatchOptions options = {});

/// Target a batch of the named stock strategies estimates by default: the
/// honest abort rate when nobody cheats, otherwise the cheater's success at
/// forcing `cheat_target` on the honest party.
Target default_target(std::string_view alice, std::string_view bob, Outcome cheat_target);

/// Closed-form click-model value of default_target for the stock strategy
/// pairs (honest/honest, fixed-plus/honest, honest/fixed-phase,
/// honest/homodyne); nullopt otherwise.
std::optional<double> model_prediction(std::string_view alice, std::string_view bob,
                                       const ExperimentParams& params);

/// Analytic upper bound on the cheater's success, nullopt when nobody cheats.
std::optional<double> analytic_cheat_bound(std::string_view alice, std::string_view bob,
                                           const ExperimentParams& params);

struct MonteCarloMerit {
    /// Cheat fields from the analytic bounds, abort from the honest batch
    /// (or the override).
    MeritReport report;
    BatchResult honest;
    /// Simulated stock cheats, for comparison with the bounds.
    BatchResult alice_fixed_plus;
    BatchResult bob_fixed_phase;
    BatchResult bob_homodyne;
};

MonteCarloMerit estimate_merit(const ExperimentParams& params, std::uint64_t n_honest,
                               std::uint64_t n_cheat, std::uint64_t master_seed,
                               std::optional<double> p_abort_override = std::nullopt,
                               BatchOptions options = {});

}  // namespace cointoss
