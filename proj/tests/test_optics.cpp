// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "cointoss/optics.hpp"
#include "cointoss/rng.hpp"

using namespace cointoss;

namespace {

constexpr double kTol = 1e-9;

// Reference values evaluated in 30-digit arithmetic (mpmath) from the
// closed-form expressions, independently of this code base.
constexpr double kDb6 = 0.25118864315095801;
constexpr double kOverlapSq027 = 0.33959552564493915;
constexpr double kMuB = 0.0067820933650758663;
constexpr double kMuLeak = 3.3910466825379331e-05;
constexpr double kEffective = 0.0058229605232587790;
constexpr double kAliceBound = 0.99709698002641142;
constexpr double kBobBound = 0.90632636954640935;
constexpr double kFixedState027 = 0.79137412618699483;
constexpr double kHalfPlusHalfRootHalf = 0.85355339059327376;

// Composite Simpson over [0, upper] of the N(mean, 1) density.
double integrate_positive_tail(double mean) {
    const int n = 200000;
    const double upper = mean + 40.0;
    const double h = upper / n;
    auto pdf = [&](double x) { return std::exp(-0.5 * (x - mean) * (x - mean)) / std::sqrt(2.0 * std::numbers::pi); };
    double sum = pdf(0.0) + pdf(upper);
    for (int i = 1; i < n; ++i) sum += pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("db_to_linear") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(6.0) == doctest::Approx(kDb6).epsilon(1e-12));
    CHECK(db_to_linear(10.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(db_to_linear(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(db_to_linear(std::nan("")), std::invalid_argument);
}

TEST_CASE("linear_to_db round trip") {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double x = 1.0 - uniform01(rng);  // (0, 1]
        CHECK(std::abs(db_to_linear(linear_to_db(x)) - x) <= 1e-12);
    }
    CHECK_THROWS_AS(linear_to_db(0.0), std::invalid_argument);
    CHECK_THROWS_AS(linear_to_db(1.5), std::invalid_argument);
}

TEST_CASE("overlap_sq") {
    CHECK(overlap_sq(0.0) == 1.0);
    CHECK(std::abs(overlap_sq(0.27) - kOverlapSq027) < kTol);
    CHECK(std::abs(overlap_sq(std::numbers::ln2 / 4.0) - 0.5) < kTol);
    CHECK_THROWS_AS(overlap_sq(-0.1), std::invalid_argument);
    for (double a = 0.0; a < 3.0; a += 0.05) CHECK(overlap_sq(a + 0.05) < overlap_sq(a));
}

TEST_CASE("helstrom_success") {
    CHECK(std::abs(helstrom_success(overlap_sq(0.27)) - 0.906) < 5e-4);
    CHECK(helstrom_success(1.0) == 0.5);
    CHECK(std::abs(helstrom_success(0.5) - kHalfPlusHalfRootHalf) < kTol);
    for (double o = 0.0; o < 0.985; o += 0.01) CHECK(helstrom_success(o + 0.01) < helstrom_success(o));
    CHECK_THROWS(helstrom_success(1.1));
}

TEST_CASE("fixed_state_cheat_success") {
    CHECK(fixed_state_cheat_success(1.0) == 1.0);
    CHECK(std::abs(fixed_state_cheat_success(std::exp(-2.0 * 0.27)) - kFixedState027) < kTol);
    CHECK(std::abs(fixed_state_cheat_success(1.0 / std::numbers::sqrt2) - kHalfPlusHalfRootHalf) < kTol);
}

TEST_CASE("alice_cheat_bound") {
    const auto reference = ExperimentParams::reference_experiment();
    CHECK(std::abs(alice_cheat_bound(reference) - kAliceBound) < kTol);
    CHECK(std::abs(alice_cheat_bound(reference) - 0.9971) < 1e-4);
    CHECK(std::abs(alice_cheat_bound(ExperimentParams::ideal(std::numbers::ln2 / 4.0)) -
                   kHalfPlusHalfRootHalf) < kTol);
    CHECK(alice_cheat_bound(ExperimentParams::ideal(0.0)) == 1.0);

    SUBCASE("monotone in every imperfection") {
        for (double extra = 0.0; extra < 10.0; extra += 0.5) {
            auto p = reference;
            auto q = reference;
            p.att_transmission_db += extra;
            q.att_transmission_db += extra + 0.5;
            CHECK(alice_cheat_bound(q) > alice_cheat_bound(p));
            p = q = reference;
            p.att_bob_db += extra;
            q.att_bob_db += extra + 0.5;
            CHECK(alice_cheat_bound(q) > alice_cheat_bound(p));
        }
        for (double qb = 0.0; qb < 0.2; qb += 0.01) {
            auto p = reference;
            auto q = reference;
            p.qber_per_photon = qb;
            q.qber_per_photon = qb + 0.01;
            CHECK(alice_cheat_bound(q) > alice_cheat_bound(p));
        }
    }
    SUBCASE("strictly decreasing in effective intensity") {
        auto p = reference;
        double previous = 1.0;
        for (double a = 0.1; a < 30.0; a += 0.1) {
            p.alpha_sq = a;
            const double b = alice_cheat_bound(p);
            CHECK(b < previous);
            previous = b;
        }
    }
    SUBCASE("perfect apparatus, tends to one half") {
        double previous = 1.0;
        for (double a = 0.5; a < 15.0; a += 0.5) {
            const double b = alice_cheat_bound(ExperimentParams::ideal(a));
            CHECK(b < previous);
            previous = b;
        }
        CHECK(alice_cheat_bound(ExperimentParams::ideal(40.0)) - 0.5 < 1e-12);
    }
}

TEST_CASE("bob_cheat_bound") {
    CHECK(std::abs(bob_cheat_bound(0.27) - kBobBound) < kTol);
    CHECK(std::abs(bob_cheat_bound(0.27) - 0.906) < 1e-3);
    CHECK(bob_cheat_bound(0.0) == 0.5);
    CHECK(std::abs(bob_cheat_bound(std::numbers::ln2 / 4.0) - kHalfPlusHalfRootHalf) < kTol);
    CHECK(1.0 - bob_cheat_bound(20.0) < 1e-12);
}

TEST_CASE("click_probability") {
    CHECK(click_probability(0.0, 0.0) == 0.0);
    CHECK(std::abs(click_probability(0.0, 4.7e-5) - 4.7e-5) < 1e-15);
    CHECK(click_probability(3.391e-5, 4.7e-5) == doctest::Approx(8.09e-5).epsilon(1e-3));
    for (double mu = 0.0; mu < 5.0; mu += 0.25) {
        const double c = click_probability(mu, 1e-3);
        CHECK(c >= 1e-3);
        CHECK(c < 1.0);
        CHECK(click_probability(mu + 0.25, 1e-3) > c);
        CHECK(click_probability(mu, 2e-3) > c);
    }
    CHECK_THROWS(click_probability(-1.0, 0.0));
    CHECK_THROWS(click_probability(1.0, 1.0));
}

TEST_CASE("derive_intensities") {
    const auto reference = derive_intensities(ExperimentParams::reference_experiment());
    CHECK(std::abs(reference.mu_at_detector - kMuB) < 1e-12);
    CHECK(std::abs(reference.mu_leak - kMuLeak) < 1e-14);
    CHECK(std::abs(reference.effective_intensity - kEffective) < 1e-12);

    const auto ideal = derive_intensities(ExperimentParams::ideal(0.4));
    CHECK(ideal.mu_at_detector == 0.4);
    CHECK(ideal.mu_leak == 0.0);
    CHECK(ideal.effective_intensity == 0.4);

    auto blind = ExperimentParams::reference_experiment();
    blind.detector_efficiency = 0.0;
    const auto zero = derive_intensities(blind);
    CHECK(zero.mu_at_detector == 0.0);
    CHECK(zero.mu_leak == 0.0);
    CHECK(zero.effective_intensity == 0.0);

    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        ExperimentParams p{.alpha_sq = 3.0 * uniform01(rng),
                           .att_transmission_db = 20.0 * uniform01(rng),
                           .att_bob_db = 20.0 * uniform01(rng),
                           .detector_efficiency = uniform01(rng),
                           .qber_per_photon = 0.5 * uniform01(rng),
                           .dark_count_prob = 0.0};
        const auto d = derive_intensities(p);
        CHECK(d.mu_leak >= 0.0);
        CHECK(d.mu_leak <= d.mu_at_detector);
        CHECK(d.mu_at_detector <= p.alpha_sq);
        CHECK(d.effective_intensity <= d.mu_at_detector);
        CHECK(p.visibility() >= 0.0);
    }
}

TEST_CASE("homodyne_success") {
    CHECK(homodyne_success(0.0) == 0.5);
    const double mean = 2.0 * std::sqrt(0.27);
    CHECK(std::abs(homodyne_success(0.27) - integrate_positive_tail(mean)) < 1e-9);
    CHECK(std::abs(homodyne_success(0.27) - 0.8506) < 1e-4);
    for (double a = 0.01; a < 4.0; a += 0.01) {
        const double h = homodyne_success(a);
        CHECK(h > 0.5);
        CHECK(h < helstrom_success(overlap_sq(a)));
        CHECK(helstrom_success(overlap_sq(a)) < 1.0);
    }
}

TEST_CASE("parameter validation") {
    auto p = ExperimentParams::reference_experiment();
    CHECK_NOTHROW(p.validate());
    p.detector_efficiency = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ExperimentParams::reference_experiment();
    p.dark_count_prob = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ExperimentParams::reference_experiment();
    p.att_bob_db = -6.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ExperimentParams::reference_experiment();
    p.alpha_sq = -0.1;
    CHECK_THROWS_AS(derive_intensities(p), std::invalid_argument);
}
