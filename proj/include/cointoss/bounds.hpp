// SPDX-License-Identifier: Apache-2.0
//
// Merit function for coin tossing with aborts:
//
//   M = (1 - p_*0)(1 - p_1*)/2 + (1 - p_*1)(1 - p_0*)/2 - p_abort
//
// M <= 0 for every classical protocol, so M > 0 certifies an advantage.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cointoss/optics.hpp"

namespace cointoss {

struct MeritReport {
    double p_star_0 = 0.0;  ///< dishonest Alice forces Bob's output 0
    double p_star_1 = 0.0;  ///< dishonest Alice forces Bob's output 1
    double p_0_star = 0.0;  ///< dishonest Bob forces Alice's output 0
    double p_1_star = 0.0;  ///< dishonest Bob forces Alice's output 1
    double p_abort_honest = 0.0;
    double merit = 0.0;
};

struct BiasPair {
    double eps_alice = 0.0;
    double eps_bob = 0.0;
};

/// Throws std::invalid_argument if any input lies outside [0, 1].
double merit(double p_star_0, double p_star_1, double p_0_star, double p_1_star, double p_abort);

/// Fills `merit` from the other five fields.
MeritReport make_report(double p_star_0, double p_star_1, double p_0_star, double p_1_star,
                        double p_abort);

/// Honest abort probability predicted by the click model: leak plus dark counts.
double model_abort_probability(const ExperimentParams& params);

/// Bounds from the analytic cheat formulas. The abort probability is the
/// click-model prediction unless a measured value is supplied.
MeritReport merit_from_params(const ExperimentParams& params,
                              std::optional<double> p_abort_override = std::nullopt);

BiasPair bias_from_report(const MeritReport& report);

struct AlphaOptimum {
    double alpha_sq = 0.0;
    double merit = 0.0;
};

/// Golden-section maximisation of merit_from_params over alpha^2 in [lo, hi]
/// to an absolute tolerance of 1e-6 on alpha^2. Requires 0 < lo < hi <= 5.
/// `params.alpha_sq` is ignored.
AlphaOptimum optimize_alpha(const ExperimentParams& params, double lo, double hi,
                            std::optional<double> p_abort_override = std::nullopt);

struct ReferenceValues {
    double quantum_merit_ceiling;  ///< (1 - 1/sqrt 2)^2, from p_*c p_c* >= 1/2
    double ambainis_merit;         ///< 1/16, all four cheat probabilities 3/4
    double pure_pair_ceiling;      ///< (1 - 1/sqrt 2)^2 / 4, both states pure
    double kitaev_bias;            ///< 1/sqrt 2, product form p_*c p_c* >= 1/2
};

ReferenceValues reference_values() noexcept;

/// How the honest abort probability follows the channel loss in a sweep.
enum class AbortScaling {
    /// p_abort stays at the baseline for every A_T.
    FixedMeasured,
    /// Dark counts stay fixed; the optical part scales with the transmitted
    /// intensity, anchored so that A_T = 0 dB reproduces the baseline.
    ModelScaled,
};

struct LossSweepPoint {
    double att_transmission_db = 0.0;
    MeritReport report;
};

struct LossSweep {
    std::vector<LossSweepPoint> points;
    /// A_T where the merit changes sign, to 0.01 dB; nullopt if M keeps one
    /// sign on [0, 60] dB.
    std::optional<double> threshold_db;
};

/// Evaluate the merit with A_T set to each value of `a_t_db_grid`. The
/// baseline abort probability, attached to params.att_transmission_db, is the
/// override if given, else the click model at the base parameters.
/// Throws std::invalid_argument on an empty grid or a negative entry.
LossSweep loss_sweep(const ExperimentParams& params, const std::vector<double>& a_t_db_grid,
                     AbortScaling scaling, std::optional<double> p_abort_override = std::nullopt);

/// Abort probability used by loss_sweep at channel loss `a_t_db`.
double swept_abort_probability(const ExperimentParams& params, double a_t_db,
                               AbortScaling scaling, std::optional<double> p_abort_override);

}  // namespace cointoss
