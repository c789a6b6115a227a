// SPDX-License-Identifier: Apache-2.0
//
// Classical coin tossing with three outcomes {0, 1, abort}.
//
// Two evaluators:
//  * eval_lemma2: closed forms for the two-round "exclude one outcome, then
//    choose among the remaining two" protocol;
//  * eval_tree: any finite protocol written as a game tree, with optimal
//    cheating found by backward induction.
// For every correct protocol (1 - p_0*)(1 - p_*1) <= p_abort and
// (1 - p_1*)(1 - p_*0) <= p_abort; verify_tj_monotone exposes the
// round-by-round quantity whose monotonicity gives these inequalities.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cointoss/outcome.hpp"

namespace cointoss {

class MalformedProtocol : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the two-round trit protocol. Alice first excludes one
/// outcome ({0,1}, {0,abort} or {1,abort} remain) with probabilities
/// q01, q0perp, q1perp; Bob then picks one of the remaining two. The
/// complementary conditionals are implied.
struct ClassicalProtocolSpec {
    double q01 = 1.0;
    double q0perp = 0.0;
    double q1perp = 0.0;
    double q0_given_01 = 0.5;
    double q0_given_0perp = 0.5;
    double q1_given_1perp = 0.5;

    /// Throws MalformedProtocol.
    void validate() const;
};

struct ClassicalReport {
    double p00 = 0.0;
    double p11 = 0.0;
    double p_perp_perp = 0.0;
    double p_star_0 = 0.0;
    double p_star_1 = 0.0;
    double p_0_star = 0.0;
    double p_1_star = 0.0;
    double lemma1_lhs_a = 0.0;  ///< (1 - p_0*)(1 - p_*1)
    double lemma1_lhs_b = 0.0;  ///< (1 - p_1*)(1 - p_*0)

    [[nodiscard]] double margin_a() const noexcept { return p_perp_perp - lemma1_lhs_a; }
    [[nodiscard]] double margin_b() const noexcept { return p_perp_perp - lemma1_lhs_b; }
    /// Both Lemma-1 inequalities within `tol`.
    [[nodiscard]] bool satisfies_lemma1(double tol = 1e-12) const noexcept {
        return margin_a() >= -tol && margin_b() >= -tol;
    }
    /// Honest parties agree and 0, 1 are equally likely, within `tol`.
    [[nodiscard]] bool is_correct(double tol = 1e-12) const noexcept;
};

ClassicalReport eval_lemma2(const ClassicalProtocolSpec& spec);

/// Symmetric family q0perp = q1perp = t, q0|01 = 1/2, q0|0perp = q1|1perp = s.
/// Both Lemma-1 left sides equal p_abort / 2. Requires t in [0, 1/2], s in [1/2, 1].
ClassicalProtocolSpec make_correct_spec(double t, double s);

enum class SaturatedInequality { A, B };

/// Family that saturates one Lemma-1 inequality exactly. For A: q0perp = 0,
/// Bob's conditional q1|1perp = s, and q0|01 set in closed form so that
/// p00 = p11. B is the mirror image (0 and 1 exchanged). Requires
/// q01 in (0, 1], s in [1/2, 1] and s (1 - q01) <= q01.
ClassicalProtocolSpec make_saturating_spec(SaturatedInequality which, double q01, double s);

enum class Party : std::uint8_t { Alice, Bob };

/// Finite game tree. Node 0 is the root; every internal node belongs to the
/// party who speaks there and carries the honest distribution over its
/// children. Leaves carry (Alice's output, Bob's output).
class ProtocolTree {
public:
    struct Leaf {
        Outcome alice_output;
        Outcome bob_output;
    };
    struct Move {
        Party speaker;
        std::vector<std::size_t> children;
        std::vector<double> probabilities;
    };
    using Node = std::variant<Leaf, Move>;

    ProtocolTree() = default;
    explicit ProtocolTree(std::vector<Node> nodes);

    /// Appends a node and returns its index.
    std::size_t add_leaf(Outcome alice_output, Outcome bob_output);
    std::size_t add_move(Party speaker, std::vector<std::size_t> children,
                         std::vector<double> probabilities);
    /// Reserves index for a move whose children are added later.
    std::size_t add_placeholder();
    void set_move(std::size_t index, Party speaker, std::vector<std::size_t> children,
                  std::vector<double> probabilities);

    [[nodiscard]] std::span<const Node> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] const Node& node(std::size_t index) const { return nodes_.at(index); }

    /// Throws MalformedProtocol unless the nodes form a tree rooted at 0 with
    /// every node reachable, valid distributions (sum 1 within 1e-12) and
    /// at least one child per move.
    void validate() const;

    /// Edges on the longest root-to-leaf path.
    [[nodiscard]] std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

/// Encodes the two-round protocol as a depth-2 tree (Alice moves, then Bob).
ProtocolTree encode_lemma2(const ClassicalProtocolSpec& spec);

/// Honest outcome distribution by forward propagation and optimal cheating
/// by backward induction.
ClassicalReport eval_tree(const ProtocolTree& tree);

/// Honest probability of reaching each node.
std::vector<double> reach_probabilities(const ProtocolTree& tree);

/// Optimal probability, from each node, that a cheating `cheater` makes the
/// honest party output `target` (indicator at leaves, max at the cheater's
/// moves, honest average at the other party's moves).
std::vector<double> cheat_values(const ProtocolTree& tree, Party cheater, Outcome target);

struct TjSequence {
    /// T_j for j = 0 .. depth; leaves reached early count at every later level.
    std::vector<double> values;
    /// values[j+1] >= values[j] - 1e-12 for every j.
    bool nondecreasing = true;
};

/// T_j(x, y) = sum over level-j states u of w(u) (1 - p_x*(u)) (1 - p_*y(u)).
/// T_0 = (1 - p_x*)(1 - p_*y); the last entry sums the honest leaves'
/// [Alice output != x][Bob output != y].
TjSequence verify_tj_monotone(const ProtocolTree& tree, Outcome x, Outcome y);

struct RandomTreeOptions {
    std::size_t max_depth = 6;
    std::size_t max_branching = 3;
    /// Probability that a move below the root stops early as a leaf.
    double leaf_probability = 0.25;
};

/// Random correct protocol: a random tree with agreeing leaf labels, joined
/// under an Alice root with its 0<->1 mirror image at probability 1/2 each,
/// which forces p00 = p11. The result has depth <= opts.max_depth.
ProtocolTree random_correct_tree(std::uint64_t seed, const RandomTreeOptions& opts = {});

/// Uniformly random valid spec.
ClassicalProtocolSpec random_spec(std::uint64_t seed);

struct AuditSummary {
    std::size_t trees = 0;
    std::size_t lemma1_violations = 0;
    std::size_t tj_violations = 0;
    std::size_t merit_violations = 0;  ///< classical M > 1e-12
    double min_margin = 0.0;           ///< smallest Lemma-1 margin seen
    double max_merit = 0.0;
};

/// Evaluates `count` random correct trees seeded from `seed`.
AuditSummary audit_random_trees(std::size_t count, std::uint64_t seed,
                                const RandomTreeOptions& opts = {});

/// Merit of a classical report.
double classical_merit(const ClassicalReport& report);

}  // namespace cointoss
