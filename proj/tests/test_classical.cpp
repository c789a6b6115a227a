// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "cointoss/bounds.hpp"
#include "cointoss/classical.hpp"
#include "cointoss/rng.hpp"
#include "oracle.hpp"

using namespace cointoss;
using cointoss::testing::best_deterministic_strategy;

namespace {

constexpr double kExact = 1e-12;

void check_reports_agree(const ClassicalReport& a, const ClassicalReport& b) {
    CHECK(std::abs(a.p00 - b.p00) <= kExact);
    CHECK(std::abs(a.p11 - b.p11) <= kExact);
    CHECK(std::abs(a.p_perp_perp - b.p_perp_perp) <= kExact);
    CHECK(std::abs(a.p_star_0 - b.p_star_0) <= kExact);
    CHECK(std::abs(a.p_star_1 - b.p_star_1) <= kExact);
    CHECK(std::abs(a.p_0_star - b.p_0_star) <= kExact);
    CHECK(std::abs(a.p_1_star - b.p_1_star) <= kExact);
}

}  // namespace

TEST_CASE("eval_lemma2 closed forms") {
    SUBCASE("symmetric family: both left sides equal half the abort rate") {
        for (const double t : {0.05, 0.2, 0.35, 0.5}) {
            for (const double s : {0.5, 0.6, 0.75, 1.0}) {
                const auto r = eval_lemma2(make_correct_spec(t, s));
                CHECK(r.is_correct());
                CHECK(std::abs(r.lemma1_lhs_a - r.p_perp_perp / 2.0) <= kExact);
                CHECK(std::abs(r.lemma1_lhs_b - r.p_perp_perp / 2.0) <= kExact);
                CHECK(std::abs(r.lemma1_lhs_a - t * (1.0 - s)) <= kExact);
            }
        }
    }
    SUBCASE("q0perp = 0 family saturates the first inequality") {
        for (const double q01 : {0.5, 0.6, 0.8, 1.0}) {
            for (const double s : {0.5, 0.75, 1.0}) {
                if (s * (1.0 - q01) > q01) continue;
                const auto spec = make_saturating_spec(SaturatedInequality::A, q01, s);
                const auto r = eval_lemma2(spec);
                CHECK(r.is_correct());
                CHECK(std::abs(r.p_perp_perp - (1.0 - s) * (1.0 - q01)) <= kExact);
                CHECK(std::abs(r.p_0_star - q01) <= kExact);
                CHECK(std::abs(r.p_star_1 - s) <= kExact);
                CHECK(std::abs(r.margin_a()) <= kExact);
                CHECK(r.margin_b() >= -kExact);
            }
        }
    }
    SUBCASE("mirror family saturates the second inequality") {
        const auto r = eval_lemma2(make_saturating_spec(SaturatedInequality::B, 0.7, 0.8));
        CHECK(r.is_correct());
        CHECK(std::abs(r.margin_b()) <= kExact);
        CHECK(r.margin_a() >= -kExact);
    }
    SUBCASE("pure classical coin: Bob cheats perfectly") {
        const auto r = eval_lemma2(ClassicalProtocolSpec{});
        CHECK(r.p00 == 0.5);
        CHECK(r.p11 == 0.5);
        CHECK(r.p_perp_perp == 0.0);
        CHECK(r.p_0_star == 1.0);
        CHECK(r.p_1_star == 1.0);
    }
    SUBCASE("invalid specs") {
        ClassicalProtocolSpec bad;
        bad.q01 = 0.9;
        CHECK_THROWS_AS(eval_lemma2(bad), MalformedProtocol);
        bad = ClassicalProtocolSpec{};
        bad.q0_given_01 = 1.5;
        CHECK_THROWS_AS(eval_lemma2(bad), MalformedProtocol);
    }
}

TEST_CASE("make_correct_spec") {
    const auto abortless = eval_lemma2(make_correct_spec(0.0, 0.5));
    CHECK(abortless.p_perp_perp == 0.0);
    CHECK(abortless.is_correct());

    const auto r = eval_lemma2(make_correct_spec(0.2, 0.75));
    CHECK(std::abs(r.p_perp_perp - 0.1) <= kExact);
    CHECK(std::abs(r.lemma1_lhs_a - 0.05) <= kExact);
    CHECK(std::abs(r.lemma1_lhs_b - 0.05) <= kExact);

    Rng rng(123);
    for (int i = 0; i < 100; ++i) {
        const double t = 0.5 * uniform01(rng);
        const double s = 0.5 + 0.5 * uniform01(rng);
        const auto report = eval_lemma2(make_correct_spec(t, s));
        CHECK(std::abs(report.p00 - report.p11) <= kExact);
        CHECK(std::abs(report.p00 - (1.0 - report.p_perp_perp) / 2.0) <= kExact);
    }
    CHECK_THROWS(make_correct_spec(0.6, 0.75));
    CHECK_THROWS(make_correct_spec(0.2, 0.4));
    CHECK_THROWS(make_saturating_spec(SaturatedInequality::A, 0.3, 0.9));
}

TEST_CASE("eval_tree agrees with eval_lemma2") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto spec = random_spec(seed);
        const auto tree = encode_lemma2(spec);
        CHECK(tree.depth() == 2);
        check_reports_agree(eval_tree(tree), eval_lemma2(spec));
    }
}

TEST_CASE("single leaf trees") {
    ProtocolTree agreed;
    agreed.add_leaf(Outcome::Zero, Outcome::Zero);
    const auto r = eval_tree(agreed);
    CHECK(r.p00 == 1.0);
    CHECK(r.p_star_0 == 1.0);
    CHECK(r.p_0_star == 1.0);
    CHECK(r.p_star_1 == 0.0);
    CHECK(r.p_1_star == 0.0);
    CHECK(r.p11 == 0.0);
    CHECK(r.p_perp_perp == 0.0);

    ProtocolTree aborted;
    aborted.add_leaf(Outcome::Abort, Outcome::Abort);
    const auto tj = verify_tj_monotone(aborted, Outcome::Zero, Outcome::One);
    REQUIRE(tj.values.size() == 1);
    CHECK(tj.values[0] == 1.0);
}

TEST_CASE("T_j on a saturating instance is constant") {
    const auto spec = make_saturating_spec(SaturatedInequality::A, 0.6, 0.75);
    const auto report = eval_lemma2(spec);
    const auto tj = verify_tj_monotone(encode_lemma2(spec), Outcome::Zero, Outcome::One);
    REQUIRE(tj.values.size() == 3);
    for (const double v : tj.values) CHECK(std::abs(v - report.p_perp_perp) <= kExact);
    CHECK(tj.nondecreasing);
}

TEST_CASE("random correct trees satisfy the abort inequalities with monotone T_j") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto tree = random_correct_tree(seed);
        CHECK(tree.depth() <= 6);
        const auto r = eval_tree(tree);
        REQUIRE(r.is_correct());
        CHECK(r.satisfies_lemma1());
        CHECK(classical_merit(r) <= kExact);

        const auto tj = verify_tj_monotone(tree, Outcome::Zero, Outcome::One);
        CHECK(tj.nondecreasing);
        CHECK(std::abs(tj.values.front() - r.lemma1_lhs_a) <= kExact);
        CHECK(std::abs(tj.values.back() - r.p_perp_perp) <= kExact);

        const auto tj_b = verify_tj_monotone(tree, Outcome::One, Outcome::Zero);
        CHECK(tj_b.nondecreasing);
        CHECK(std::abs(tj_b.values.front() - r.lemma1_lhs_b) <= kExact);
        CHECK(std::abs(tj_b.values.back() - r.p_perp_perp) <= kExact);
    }
}

TEST_CASE("T_j is nondecreasing for every target pair") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto tree = random_correct_tree(seed + 5000, {.max_depth = 5, .max_branching = 3});
        for (const Outcome x : kAllOutcomes) {
            for (const Outcome y : kAllOutcomes) CHECK(verify_tj_monotone(tree, x, y).nondecreasing);
        }
    }
}

TEST_CASE("backward induction matches exhaustive enumeration on shallow trees") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto tree = random_correct_tree(seed + 10000, {.max_depth = 3, .max_branching = 3});
        REQUIRE(tree.depth() <= 3);
        for (const Party cheater : {Party::Alice, Party::Bob}) {
            for (const Outcome target : kAllOutcomes) {
                const double induction = cheat_values(tree, cheater, target)[0];
                const double enumerated = best_deterministic_strategy(tree, cheater, target);
                CHECK(std::abs(induction - enumerated) <= kExact);
            }
        }
    }
    // Lemma-2 trees too, which are not symmetrised.
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto tree = encode_lemma2(random_spec(seed + 777));
        for (const Party cheater : {Party::Alice, Party::Bob}) {
            for (const Outcome target : kAllOutcomes) {
                CHECK(std::abs(cheat_values(tree, cheater, target)[0] -
                               best_deterministic_strategy(tree, cheater, target)) <= kExact);
            }
        }
    }
}

TEST_CASE("every classical report has non-positive merit") {
    Rng rng(4242);
    for (int i = 0; i < 200; ++i) {
        const double t = 0.5 * uniform01(rng);
        const double s = 0.5 + 0.5 * uniform01(rng);
        CHECK(classical_merit(eval_lemma2(make_correct_spec(t, s))) <= kExact);
        const double q01 = 0.5 + 0.5 * uniform01(rng);
        const auto which = i % 2 == 0 ? SaturatedInequality::A : SaturatedInequality::B;
        CHECK(classical_merit(eval_lemma2(make_saturating_spec(which, q01, s))) <= kExact);
    }
    const auto summary = audit_random_trees(300, 99);
    CHECK(summary.trees == 300);
    CHECK(summary.lemma1_violations == 0);
    CHECK(summary.tj_violations == 0);
    CHECK(summary.merit_violations == 0);
    CHECK(summary.min_margin >= -kExact);
    CHECK(summary.max_merit <= kExact);
}

TEST_CASE("malformed trees are rejected") {
    SUBCASE("empty") { CHECK_THROWS_AS(ProtocolTree{}.validate(), MalformedProtocol); }
    SUBCASE("probabilities not normalised") {
        ProtocolTree t;
        const auto root = t.add_placeholder();
        const auto a = t.add_leaf(Outcome::Zero, Outcome::Zero);
        const auto b = t.add_leaf(Outcome::One, Outcome::One);
        t.set_move(root, Party::Bob, {a, b}, {0.5, 0.6});
        CHECK_THROWS_AS(eval_tree(t), MalformedProtocol);
    }
    SUBCASE("child count mismatch") {
        ProtocolTree t;
        const auto root = t.add_placeholder();
        const auto a = t.add_leaf(Outcome::Zero, Outcome::Zero);
        t.set_move(root, Party::Bob, {a}, {0.5, 0.5});
        CHECK_THROWS_AS(t.validate(), MalformedProtocol);
    }
    SUBCASE("shared child") {
        ProtocolTree t;
        const auto root = t.add_placeholder();
        const auto a = t.add_leaf(Outcome::Zero, Outcome::Zero);
        t.set_move(root, Party::Bob, {a, a}, {0.5, 0.5});
        CHECK_THROWS_AS(t.validate(), MalformedProtocol);
    }
    SUBCASE("cycle back to the root") {
        ProtocolTree t;
        const auto root = t.add_placeholder();
        const auto inner = t.add_placeholder();
        t.set_move(root, Party::Alice, {inner}, {1.0});
        t.set_move(inner, Party::Bob, {0}, {1.0});
        CHECK_THROWS_AS(t.validate(), MalformedProtocol);
    }
    SUBCASE("unreachable node") {
        ProtocolTree t;
        t.add_leaf(Outcome::Zero, Outcome::Zero);
        t.add_leaf(Outcome::One, Outcome::One);
        CHECK_THROWS_AS(t.validate(), MalformedProtocol);
    }
    SUBCASE("dangling child index") {
        ProtocolTree t;
        const auto root = t.add_placeholder();
        t.set_move(root, Party::Alice, {5}, {1.0});
        CHECK_THROWS_AS(t.validate(), MalformedProtocol);
    }
}
