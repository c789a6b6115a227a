// SPDX-License-Identifier: Apache-2.0
#include "cointoss/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cointoss/bounds.hpp"
#include "cointoss/rng.hpp"

namespace cointoss {

namespace {

constexpr double kSumTolerance = 1e-12;

void require_unit(double p, const char* name) {
    if (!(std::isfinite(p) && p >= 0.0 && p <= 1.0)) {
        throw MalformedProtocol(std::string(name) + " must lie in [0, 1]");
    }
}

double indicator(bool b) { return b ? 1.0 : 0.0; }

Outcome mirror(Outcome o) {
    switch (o) {
        case Outcome::Zero: return Outcome::One;
        case Outcome::One: return Outcome::Zero;
        case Outcome::Abort: break;
    }
    return Outcome::Abort;
}

ClassicalReport finish(ClassicalReport r) {
    r.lemma1_lhs_a = (1.0 - r.p_0_star) * (1.0 - r.p_star_1);
    r.lemma1_lhs_b = (1.0 - r.p_1_star) * (1.0 - r.p_star_0);
    return r;
}

}  // namespace

bool ClassicalReport::is_correct(double tol) const noexcept {
    return std::abs(p00 + p11 + p_perp_perp - 1.0) <= tol && std::abs(p00 - p11) <= tol;
}

void ClassicalProtocolSpec::validate() const {
    require_unit(q01, "q01");
    require_unit(q0perp, "q0perp");
    require_unit(q1perp, "q1perp");
    require_unit(q0_given_01, "q0_given_01");
    require_unit(q0_given_0perp, "q0_given_0perp");
    require_unit(q1_given_1perp, "q1_given_1perp");
    if (std::abs(q01 + q0perp + q1perp - 1.0) > kSumTolerance) {
        throw MalformedProtocol("q01 + q0perp + q1perp must equal 1");
    }
}

ClassicalReport eval_lemma2(const ClassicalProtocolSpec& spec) {
    spec.validate();
    const double q1_given_01 = 1.0 - spec.q0_given_01;
    const double perp_given_0perp = 1.0 - spec.q0_given_0perp;
    const double perp_given_1perp = 1.0 - spec.q1_given_1perp;
    ClassicalReport r;
    r.p00 = spec.q0_given_01 * spec.q01 + spec.q0_given_0perp * spec.q0perp;
    r.p11 = q1_given_01 * spec.q01 + spec.q1_given_1perp * spec.q1perp;
    r.p_perp_perp = perp_given_0perp * spec.q0perp + perp_given_1perp * spec.q1perp;
    r.p_star_0 = std::max(spec.q0_given_01, spec.q0_given_0perp);
    r.p_star_1 = std::max(q1_given_01, spec.q1_given_1perp);
    r.p_0_star = spec.q01 + spec.q0perp;
    r.p_1_star = spec.q01 + spec.q1perp;
    return finish(r);
}

ClassicalProtocolSpec make_correct_spec(double t, double s) {
    if (!(t >= 0.0 && t <= 0.5)) throw std::invalid_argument("t must lie in [0, 1/2]");
    if (!(s >= 0.5 && s <= 1.0)) throw std::invalid_argument("s must lie in [1/2, 1]");
    return ClassicalProtocolSpec{
        .q01 = 1.0 - 2.0 * t,
        .q0perp = t,
        .q1perp = t,
        .q0_given_01 = 0.5,
        .q0_given_0perp = s,
        .q1_given_1perp = s,
    };
}

ClassicalProtocolSpec make_saturating_spec(SaturatedInequality which, double q01, double s) {
    if (!(q01 > 0.0 && q01 <= 1.0)) throw std::invalid_argument("q01 must lie in (0, 1]");
    if (!(s >= 0.5 && s <= 1.0)) throw std::invalid_argument("s must lie in [1/2, 1]");
    const double excluded = 1.0 - q01;
    if (s * excluded > q01) throw std::invalid_argument("need s (1 - q01) <= q01 for a correct protocol");

    // p00 = p11 with q0perp = 0:  q0|01 q01 = (1 - q0|01) q01 + s (1 - q01).
    const double favoured = (q01 + s * excluded) / (2.0 * q01);
    ClassicalProtocolSpec spec;
    spec.q01 = q01;
    if (which == SaturatedInequality::A) {
        spec.q0perp = 0.0;
        spec.q1perp = excluded;
        spec.q0_given_01 = favoured;
        spec.q0_given_0perp = 0.5;
        spec.q1_given_1perp = s;
    } else {
        spec.q0perp = excluded;
        spec.q1perp = 0.0;
        spec.q0_given_01 = 1.0 - favoured;
        spec.q0_given_0perp = s;
        spec.q1_given_1perp = 0.5;
    }
    return spec;
}

// ---------------------------------------------------------------------------
// ProtocolTree

ProtocolTree::ProtocolTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

std::size_t ProtocolTree::add_leaf(Outcome alice_output, Outcome bob_output) {
    nodes_.emplace_back(Leaf{alice_output, bob_output});
    return nodes_.size() - 1;
}

std::size_t ProtocolTree::add_move(Party speaker, std::vector<std::size_t> children,
                                   std::vector<double> probabilities) {
    nodes_.emplace_back(Move{speaker, std::move(children), std::move(probabilities)});
    return nodes_.size() - 1;
}

std::size_t ProtocolTree::add_placeholder() { return add_move(Party::Alice, {}, {}); }

void ProtocolTree::set_move(std::size_t index, Party speaker, std::vector<std::size_t> children,
                            std::vector<double> probabilities) {
    nodes_.at(index) = Move{speaker, std::move(children), std::move(probabilities)};
}

void ProtocolTree::validate() const {
    if (nodes_.empty()) throw MalformedProtocol("protocol tree has no nodes");
    std::vector<int> parents(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto* move = std::get_if<Move>(&nodes_[i]);
        if (move == nullptr) continue;
        const std::string where = "node " + std::to_string(i);
        if (move->children.empty()) throw MalformedProtocol(where + " has no children");
        if (move->children.size() != move->probabilities.size()) {
            throw MalformedProtocol(where + " has " + std::to_string(move->children.size()) +
                                    " children but " + std::to_string(move->probabilities.size()) +
                                    " probabilities");
        }
        double sum = 0.0;
        for (const double p : move->probabilities) {
            if (!(std::isfinite(p) && p >= 0.0 && p <= 1.0)) {
                throw MalformedProtocol(where + " has a probability outside [0, 1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw MalformedProtocol(where + " probabilities do not sum to 1");
        }
        for (const std::size_t child : move->children) {
            if (child == 0 || child >= nodes_.size()) {
                throw MalformedProtocol(where + " has invalid child " + std::to_string(child));
            }
            ++parents[child];
        }
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (parents[i] != 1) {
            throw MalformedProtocol("node " + std::to_string(i) + " has " + std::to_string(parents[i]) +
                                    " parents");
        }
    }
    // Single parent everywhere plus n - 1 edges: reachability rules out cycles.
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::size_t> stack{0};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (seen[i]) throw MalformedProtocol("protocol graph has a cycle");
        seen[i] = true;
        ++visited;
        if (const auto* move = std::get_if<Move>(&nodes_[i])) {
            stack.insert(stack.end(), move->children.begin(), move->children.end());
        }
    }
    if (visited != nodes_.size()) throw MalformedProtocol("protocol tree has unreachable nodes");
}

namespace {

/// Depth of every node; assumes a validated tree.
std::vector<std::size_t> node_depths(const ProtocolTree& tree) {
    std::vector<std::size_t> depth(tree.size(), 0);
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (const auto* move = std::get_if<ProtocolTree::Move>(&tree.node(i))) {
            for (const std::size_t c : move->children) {
                depth[c] = depth[i] + 1;
                stack.push_back(c);
            }
        }
    }
    return depth;
}

/// Nodes ordered so that every parent precedes its children.
std::vector<std::size_t> preorder(const ProtocolTree& tree) {
    std::vector<std::size_t> order;
    order.reserve(tree.size());
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        order.push_back(i);
        if (const auto* move = std::get_if<ProtocolTree::Move>(&tree.node(i))) {
            stack.insert(stack.end(), move->children.rbegin(), move->children.rend());
        }
    }
    return order;
}

}  // namespace

std::size_t ProtocolTree::depth() const {
    validate();
    const auto depths = node_depths(*this);
    return *std::max_element(depths.begin(), depths.end());
}

ProtocolTree encode_lemma2(const ClassicalProtocolSpec& spec) {
    spec.validate();
    ProtocolTree tree;
    const std::size_t root = tree.add_placeholder();
    auto bob_choice = [&](Outcome first, Outcome second, double p_first) {
        const std::size_t a = tree.add_leaf(first, first);
        const std::size_t b = tree.add_leaf(second, second);
        return tree.add_move(Party::Bob, {a, b}, {p_first, 1.0 - p_first});
    };
    const std::size_t keep01 = bob_choice(Outcome::Zero, Outcome::One, spec.q0_given_01);
    const std::size_t keep0perp = bob_choice(Outcome::Zero, Outcome::Abort, spec.q0_given_0perp);
    const std::size_t keep1perp = bob_choice(Outcome::One, Outcome::Abort, spec.q1_given_1perp);
    tree.set_move(root, Party::Alice, {keep01, keep0perp, keep1perp},
                  {spec.q01, spec.q0perp, spec.q1perp});
    return tree;
}

std::vector<double> reach_probabilities(const ProtocolTree& tree) {
    tree.validate();
    std::vector<double> w(tree.size(), 0.0);
    w[0] = 1.0;
    for (const std::size_t i : preorder(tree)) {
        if (const auto* move = std::get_if<ProtocolTree::Move>(&tree.node(i))) {
            for (std::size_t k = 0; k < move->children.size(); ++k) {
                w[move->children[k]] = w[i] * move->probabilities[k];
            }
        }
    }
    return w;
}

std::vector<double> cheat_values(const ProtocolTree& tree, Party cheater, Outcome target) {
    tree.validate();
    std::vector<double> value(tree.size(), 0.0);
    const auto order = preorder(tree);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t i = *it;
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, ProtocolTree::Leaf>) {
                    // The honest party's output is what the cheater steers.
                    const Outcome honest_output =
                        cheater == Party::Alice ? node.bob_output : node.alice_output;
                    value[i] = indicator(honest_output == target);
                } else if (node.speaker == cheater) {
                    double best = 0.0;
                    for (const std::size_t c : node.children) best = std::max(best, value[c]);
                    value[i] = best;
                } else {
                    double avg = 0.0;
                    for (std::size_t k = 0; k < node.children.size(); ++k) {
                        avg += node.probabilities[k] * value[node.children[k]];
                    }
                    // Weights sum to 1 only up to rounding.
                    value[i] = std::min(avg, 1.0);
                }
            },
            tree.node(i));
    }
    return value;
}

ClassicalReport eval_tree(const ProtocolTree& tree) {
    const auto w = reach_probabilities(tree);
    ClassicalReport r;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto* leaf = std::get_if<ProtocolTree::Leaf>(&tree.node(i));
        if (leaf == nullptr || leaf->alice_output != leaf->bob_output) continue;
        switch (leaf->alice_output) {
            case Outcome::Zero: r.p00 += w[i]; break;
            case Outcome::One: r.p11 += w[i]; break;
            case Outcome::Abort: r.p_perp_perp += w[i]; break;
        }
    }
    r.p_star_0 = cheat_values(tree, Party::Alice, Outcome::Zero)[0];
    r.p_star_1 = cheat_values(tree, Party::Alice, Outcome::One)[0];
    r.p_0_star = cheat_values(tree, Party::Bob, Outcome::Zero)[0];
    r.p_1_star = cheat_values(tree, Party::Bob, Outcome::One)[0];
    return finish(r);
}

TjSequence verify_tj_monotone(const ProtocolTree& tree, Outcome x, Outcome y) {
    const auto w = reach_probabilities(tree);
    const auto bob_forces_x = cheat_values(tree, Party::Bob, x);
    const auto alice_forces_y = cheat_values(tree, Party::Alice, y);
    const auto depth = node_depths(tree);
    const std::size_t levels = *std::max_element(depth.begin(), depth.end()) + 1;

    TjSequence seq;
    seq.values.assign(levels, 0.0);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const double term = w[i] * (1.0 - bob_forces_x[i]) * (1.0 - alice_forces_y[i]);
        const bool is_leaf = std::holds_alternative<ProtocolTree::Leaf>(tree.node(i));
        // A finished protocol stays in its final state for the remaining rounds.
        const std::size_t last = is_leaf ? levels - 1 : depth[i];
        for (std::size_t j = depth[i]; j <= last; ++j) seq.values[j] += term;
    }
    for (std::size_t j = 0; j + 1 < levels; ++j) {
        if (seq.values[j + 1] < seq.values[j] - 1e-12) seq.nondecreasing = false;
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Random protocols

namespace {

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
    std::vector<double> weights(n);
    for (auto& x : weights) {
        // Occasionally a move the honest party never makes, which a cheater may still use.
        x = bernoulli(rng, 0.15) ? 0.0 : uniform01(rng) + 1e-3;
    }
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (sum == 0.0) {
        weights[0] = 1.0;
        sum = 1.0;
    }
    for (auto& x : weights) x /= sum;
    return weights;
}

Outcome random_agreed_outcome(Rng& rng) {
    const auto pick = rng() % 3;
    return pick == 0 ? Outcome::Zero : pick == 1 ? Outcome::One : Outcome::Abort;
}

std::size_t grow(ProtocolTree& tree, Rng& rng, const RandomTreeOptions& opts,
                 std::size_t remaining_depth, bool force_move) {
    const bool stop = remaining_depth == 0 || (!force_move && bernoulli(rng, opts.leaf_probability));
    if (stop) {
        const Outcome o = random_agreed_outcome(rng);
        return tree.add_leaf(o, o);
    }
    const std::size_t self = tree.add_placeholder();
    const Party speaker = (rng() & 1U) != 0 ? Party::Alice : Party::Bob;
    const std::size_t branching = 1 + static_cast<std::size_t>(rng() % opts.max_branching);
    std::vector<std::size_t> children;
    for (std::size_t k = 0; k < branching; ++k) {
        children.push_back(grow(tree, rng, opts, remaining_depth - 1, false));
    }
    tree.set_move(self, speaker, std::move(children), random_distribution(rng, branching));
    return self;
}

std::size_t copy_subtree(const ProtocolTree& from, std::size_t index, bool swap_coin,
                         ProtocolTree& to) {
    const auto& node = from.node(index);
    if (const auto* leaf = std::get_if<ProtocolTree::Leaf>(&node)) {
        return swap_coin ? to.add_leaf(mirror(leaf->alice_output), mirror(leaf->bob_output))
                         : to.add_leaf(leaf->alice_output, leaf->bob_output);
    }
    const auto& move = std::get<ProtocolTree::Move>(node);
    const std::size_t self = to.add_placeholder();
    std::vector<std::size_t> children;
    for (const std::size_t c : move.children) children.push_back(copy_subtree(from, c, swap_coin, to));
    to.set_move(self, move.speaker, std::move(children), move.probabilities);
    return self;
}

}  // namespace

ProtocolTree random_correct_tree(std::uint64_t seed, const RandomTreeOptions& opts) {
    if (opts.max_depth < 1 || opts.max_branching < 1) {
        throw std::invalid_argument("random trees need max_depth >= 1 and max_branching >= 1");
    }
    Rng rng(derive_seed(seed, 0, StreamRole::Auxiliary));
    ProtocolTree half;
    grow(half, rng, opts, opts.max_depth - 1, false);

    ProtocolTree tree;
    const std::size_t root = tree.add_placeholder();
    const std::size_t original = copy_subtree(half, 0, false, tree);
    const std::size_t mirrored = copy_subtree(half, 0, true, tree);
    tree.set_move(root, Party::Alice, {original, mirrored}, {0.5, 0.5});
    return tree;
}

ClassicalProtocolSpec random_spec(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 1, StreamRole::Auxiliary));
    const double a = uniform01(rng);
    const double b = uniform01(rng);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    ClassicalProtocolSpec spec;
    spec.q01 = lo;
    spec.q0perp = hi - lo;
    spec.q1perp = 1.0 - spec.q01 - spec.q0perp;
    spec.q0_given_01 = uniform01(rng);
    spec.q0_given_0perp = uniform01(rng);
    spec.q1_given_1perp = uniform01(rng);
    return spec;
}

double classical_merit(const ClassicalReport& report) {
    return merit(report.p_star_0, report.p_star_1, report.p_0_star, report.p_1_star,
                 report.p_perp_perp);
}

AuditSummary audit_random_trees(std::size_t count, std::uint64_t seed, const RandomTreeOptions& opts) {
    AuditSummary summary;
    summary.min_margin = 1.0;
    summary.max_merit = -1.0;
    for (std::size_t n = 0; n < count; ++n) {
        const auto tree = random_correct_tree(derive_seed(seed, n, StreamRole::Auxiliary), opts);
        const auto report = eval_tree(tree);
        ++summary.trees;
        if (!report.satisfies_lemma1()) ++summary.lemma1_violations;
        const auto tj_a = verify_tj_monotone(tree, Outcome::Zero, Outcome::One);
        const auto tj_b = verify_tj_monotone(tree, Outcome::One, Outcome::Zero);
        if (!tj_a.nondecreasing || !tj_b.nondecreasing) ++summary.tj_violations;
        const double m = classical_merit(report);
        if (m > 1e-12) ++summary.merit_violations;
        summary.min_margin = std::min({summary.min_margin, report.margin_a(), report.margin_b()});
        summary.max_merit = std::max(summary.max_merit, m);
    }
    if (count == 0) {
        summary.min_margin = 0.0;
        summary.max_merit = 0.0;
    }
    return summary;
}

}  // namespace cointoss
