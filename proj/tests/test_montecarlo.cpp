// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "cointoss/montecarlo.hpp"

using namespace cointoss;

namespace {

ExperimentParams reference() { return ExperimentParams::reference_experiment(); }

}  // namespace

TEST_CASE("Wilson interval") {
    // Reference values from statsmodels proportion_confint(method="wilson").
    const auto none = wilson_interval(0, 10);
    CHECK(none.lo == 0.0);
    CHECK(std::abs(none.hi - 0.27753279986288926) < 1e-12);
    const auto three = wilson_interval(3, 10);
    CHECK(std::abs(three.lo - 0.10779126740630104) < 1e-12);
    CHECK(std::abs(three.hi - 0.6032218525388546) < 1e-12);
    const auto rare = wilson_interval(21, 150000);
    CHECK(std::abs(rare.lo - 9.157487569023444e-05) < 1e-15);
    CHECK(std::abs(rare.hi - 0.00021402702340032046) < 1e-15);
    const auto all = wilson_interval(10, 10);
    CHECK(std::abs(all.lo - 0.7224672001371106) < 1e-12);
    CHECK(all.hi == 1.0);
}

TEST_CASE("batch bookkeeping") {
    const auto r = run_batch(*honest_alice(), *honest_bob(), reference(), 20000, 5, Target::both_abort());
    std::uint64_t total = 0;
    for (const auto& row : r.counts) {
        for (const auto c : row) total += c;
    }
    CHECK(total == r.n_sessions);
    CHECK(r.hits == r.count(Outcome::Abort, Outcome::Abort));
    CHECK(r.ci95.contains(r.estimate));
    CHECK(r.std_error == doctest::Approx(std::sqrt(r.estimate * (1 - r.estimate) / 20000.0)));
    CHECK(r.bob_count(Outcome::Zero) + r.bob_count(Outcome::One) + r.bob_count(Outcome::Abort) == 20000);
    // Honest parties never disagree.
    CHECK(r.count(Outcome::Zero, Outcome::One) == 0);
    CHECK(r.count(Outcome::One, Outcome::Zero) == 0);
    CHECK_THROWS_AS(run_batch(*honest_alice(), *honest_bob(), reference(), 0, 5, Target::both_abort()),
                    std::invalid_argument);
}

TEST_CASE("seed determinism and worker independence") {
    const auto alice = cheat_alice_fixed_plus(Outcome::One);
    const auto bob = honest_bob();
    const auto target = Target::bob_outputs(Outcome::One);
    const auto serial = run_batch(*alice, *bob, reference(), 30001, 77, target, {.workers = 1});
    CHECK(serial == run_batch(*alice, *bob, reference(), 30001, 77, target, {.workers = 1}));
    CHECK(serial == run_batch(*alice, *bob, reference(), 30001, 77, target, {.workers = 3}));
    CHECK(serial == run_batch(*alice, *bob, reference(), 30001, 77, target, {.workers = 8}));
    CHECK(serial == run_batch(*alice, *bob, reference(), 30001, 77, target, {.workers = 0}));
    CHECK_FALSE(serial == run_batch(*alice, *bob, reference(), 30001, 78, target, {.workers = 1}));
}

TEST_CASE("noiseless honest batch") {
    const auto r = run_batch(*honest_alice(), *honest_bob(), ExperimentParams::ideal(0.27), 10000, 2024,
                             Target::bob_outputs(Outcome::One));
    CHECK(r.bob_count(Outcome::Abort) == 0);
    CHECK(r.alice_count(Outcome::Abort) == 0);
    CHECK(r.hits >= 4800);
    CHECK(r.hits <= 5200);
}

TEST_CASE("estimator consistency over repeated campaigns") {
    // Closed form (30-digit evaluation of the click model) for fixed-phase Bob
    // at the reference operating point.
    constexpr double kFixedPhase = 0.51338076940028755;
    const auto alice = honest_alice();
    const auto bob = cheat_bob_fixed_phase(Outcome::One);
    const auto target = Target::alice_outputs(Outcome::One);

    double previous_width = 1.0;
    for (const std::uint64_t n : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
        int covered = 0;
        double width = 0.0;
        for (std::uint64_t campaign = 0; campaign < 100; ++campaign) {
            const auto r = run_batch(*alice, *bob, reference(), n, 1000 * n + campaign, target);
            covered += r.ci95.contains(kFixedPhase) ? 1 : 0;
            width += r.ci95.hi - r.ci95.lo;
        }
        CHECK(covered >= 90);
        CHECK(width / 100.0 < previous_width);
        previous_width = width / 100.0;
    }
}

TEST_CASE("model predictions and targets for stock pairs") {
    CHECK(default_target("honest", "honest", Outcome::One).kind == Target::Kind::BothAbort);
    CHECK(default_target("fixed-plus", "honest", Outcome::One).kind == Target::Kind::BobOutputs);
    CHECK(default_target("honest", "homodyne", Outcome::Zero).kind == Target::Kind::AliceOutputs);

    // 30-digit click-model evaluations.
    CHECK(std::abs(*model_prediction("honest", "honest", reference()) - 8.0908298107080188e-05) < 1e-15);
    CHECK(std::abs(*model_prediction("fixed-plus", "honest", reference()) - 0.98653832230160537) < 1e-12);
    CHECK(std::abs(*model_prediction("honest", "fixed-phase", reference()) - 0.51338076940028755) < 1e-12);
    CHECK(std::abs(*model_prediction("honest", "homodyne", reference()) - 0.85065122200251492) < 1e-12);
    CHECK_FALSE(model_prediction("fixed-plus", "homodyne", reference()));

    CHECK(*analytic_cheat_bound("fixed-plus", "honest", reference()) == alice_cheat_bound(reference()));
    CHECK(*analytic_cheat_bound("honest", "fixed-phase", reference()) == bob_cheat_bound(0.27));
    CHECK_FALSE(analytic_cheat_bound("honest", "honest", reference()));
}

TEST_CASE("estimate_merit") {
    SUBCASE("measured abort override reproduces the experimental merit") {
        const auto mc = estimate_merit(reference(), 1000, 1000, 1, 1.40e-4);
        CHECK(std::abs(mc.report.merit - 1.33e-4) <= 0.02e-4);
        CHECK(mc.report.p_abort_honest == 1.40e-4);
        CHECK(mc.report.p_star_0 == alice_cheat_bound(reference()));
        CHECK(mc.report.p_0_star == bob_cheat_bound(0.27));
    }
    SUBCASE("ideal apparatus converges to the analytic merit") {
        const auto mc = estimate_merit(ExperimentParams::ideal(0.1732868), 20000, 2000, 9);
        CHECK(mc.honest.hits == 0);
        CHECK(std::abs(mc.report.merit - 0.0214466) < 1e-6);
    }
    SUBCASE("single honest session is legal") {
        const auto mc = estimate_merit(reference(), 1, 1, 3);
        CHECK(mc.honest.n_sessions == 1);
        CHECK(mc.honest.ci95.hi - mc.honest.ci95.lo > 0.5);
        CHECK(std::isfinite(mc.report.merit));
    }
    SUBCASE("simulated cheats are reported alongside") {
        const auto mc = estimate_merit(reference(), 1000, 50000, 4);
        CHECK(mc.alice_fixed_plus.estimate <= mc.report.p_star_1 + 4 * mc.alice_fixed_plus.std_error);
        CHECK(mc.bob_fixed_phase.estimate <= mc.report.p_1_star + 4 * mc.bob_fixed_phase.std_error);
        CHECK(mc.bob_homodyne.estimate <= mc.report.p_1_star + 4 * mc.bob_homodyne.std_error);
    }
    CHECK_THROWS(estimate_merit(reference(), 0, 1, 1));
}
