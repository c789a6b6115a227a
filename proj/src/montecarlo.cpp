// SPDX-License-Identifier: Apache-2.0
#include "cointoss/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cointoss {

bool Target::matches(Outcome alice_output, Outcome bob_output) const noexcept {
    switch (kind) {
        case Kind::BobOutputs: return bob_output == value;
        case Kind::AliceOutputs: return alice_output == value;
        case Kind::BothAbort: return alice_output == Outcome::Abort && bob_output == Outcome::Abort;
    }
    return false;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // Clamp so the interval always contains p despite rounding at p = 0 or 1.
    return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

std::uint64_t BatchResult::bob_count(Outcome o) const noexcept {
    std::uint64_t total = 0;
    for (const auto& row : counts) total += row[index_of(o)];
    return total;
}

std::uint64_t BatchResult::alice_count(Outcome o) const noexcept {
    std::uint64_t total = 0;
    for (const auto c : counts[index_of(o)]) total += c;
    return total;
}

BatchResult run_batch(const AliceStrategy& alice, const BobStrategy& bob,
                      const ExperimentParams& params, std::uint64_t n, std::uint64_t master_seed,
                      Target target, BatchOptions options) {
    if (n == 0) throw std::invalid_argument("a batch needs at least one session");
    params.validate();

    std::size_t workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                               : options.workers;
    workers = static_cast<std::size_t>(std::min<std::uint64_t>(workers, n));

    using Counts = std::array<std::array<std::uint64_t, 3>, 3>;
    std::vector<Counts> partial(workers, Counts{});
    auto work = [&](std::size_t w) {
        const std::uint64_t begin = n * w / workers;
        const std::uint64_t end = n * (w + 1) / workers;
        Counts& local = partial[w];
        for (std::uint64_t i = begin; i < end; ++i) {
            const Transcript t = run_session(alice, bob, params, master_seed, i);
            ++local[index_of(t.alice_output)][index_of(t.bob_output)];
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    BatchResult result;
    result.n_sessions = n;
    for (const auto& local : partial) {
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) result.counts[x][y] += local[x][y];
        }
    }
    for (const Outcome x : kAllOutcomes) {
        for (const Outcome y : kAllOutcomes) {
            if (target.matches(x, y)) result.hits += result.count(x, y);
        }
    }
    const double nn = static_cast<double>(n);
    result.estimate = static_cast<double>(result.hits) / nn;
    result.std_error = std::sqrt(result.estimate * (1.0 - result.estimate) / nn);
    result.ci95 = wilson_interval(result.hits, n);
    return result;
}

Target default_target(std::string_view alice, std::string_view bob, Outcome cheat_target) {
    if (alice != "honest") return Target::bob_outputs(cheat_target);
    if (bob != "honest") return Target::alice_outputs(cheat_target);
    return Target::both_abort();
}

std::optional<double> model_prediction(std::string_view alice, std::string_view bob,
                                       const ExperimentParams& params) {
    const auto mu = derive_intensities(params);
    const double dark = params.dark_count_prob;
    // Displacing for the wrong hypothesis leaves (2 sqrt(mu_B))^2 photons.
    const double wrong = 4.0 * mu.mu_at_detector + mu.mu_leak;
    if (alice == "honest" && bob == "honest") return click_probability(mu.mu_leak, dark);
    if (alice == "fixed-plus" && bob == "honest") {
        return 0.5 * (1.0 - click_probability(mu.mu_leak, dark)) +
               0.5 * (1.0 - click_probability(wrong, dark));
    }
    if (alice == "honest" && bob == "fixed-phase") {
        return 0.5 * (1.0 - click_probability(mu.mu_leak, dark)) + 0.5 * click_probability(wrong, dark);
    }
    if (alice == "honest" && bob == "homodyne") return homodyne_success(params.alpha_sq);
    return std::nullopt;
}

std::optional<double> analytic_cheat_bound(std::string_view alice, std::string_view bob,
                                           const ExperimentParams& params) {
    if (alice != "honest") return alice_cheat_bound(params);
    if (bob != "honest") return bob_cheat_bound(params.alpha_sq);
    return std::nullopt;
}

MonteCarloMerit estimate_merit(const ExperimentParams& params, std::uint64_t n_honest,
                               std::uint64_t n_cheat, std::uint64_t master_seed,
                               std::optional<double> p_abort_override, BatchOptions options) {
    if (n_honest == 0 || n_cheat == 0) throw std::invalid_argument("session counts must be >= 1");
    // Distinct sub-seeds keep the four batches statistically independent.
    const auto seed_for = [&](std::uint64_t k) { return derive_seed(master_seed, k, StreamRole::Auxiliary); };

    MonteCarloMerit mc;
    mc.honest = run_batch(*honest_alice(), *honest_bob(), params, n_honest, seed_for(0),
                          Target::both_abort(), options);
    mc.alice_fixed_plus = run_batch(*cheat_alice_fixed_plus(Outcome::One), *honest_bob(), params,
                                    n_cheat, seed_for(1), Target::bob_outputs(Outcome::One), options);
    mc.bob_fixed_phase = run_batch(*honest_alice(), *cheat_bob_fixed_phase(Outcome::One), params,
                                   n_cheat, seed_for(2), Target::alice_outputs(Outcome::One), options);
    mc.bob_homodyne = run_batch(*honest_alice(), *cheat_bob_homodyne(Outcome::One), params, n_cheat,
                                seed_for(3), Target::alice_outputs(Outcome::One), options);
    mc.report = merit_from_params(params, p_abort_override ? *p_abort_override : mc.honest.estimate);
    return mc;
}

}  // namespace cointoss
