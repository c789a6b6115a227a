// SPDX-License-Identifier: Apache-2.0
#include "cointoss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cointoss {

namespace {

void require_probability(double p, const char* name) {
    if (!(std::isfinite(p) && p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

constexpr double kSweepUpperDb = 60.0;
constexpr double kThresholdToleranceDb = 0.01;

}  // namespace

double merit(double p_star_0, double p_star_1, double p_0_star, double p_1_star, double p_abort) {
    require_probability(p_star_0, "p_star_0");
    require_probability(p_star_1, "p_star_1");
    require_probability(p_0_star, "p_0_star");
    require_probability(p_1_star, "p_1_star");
    require_probability(p_abort, "p_abort");
    return (1.0 - p_star_0) * (1.0 - p_1_star) / 2.0 + (1.0 - p_star_1) * (1.0 - p_0_star) / 2.0 -
           p_abort;
}

MeritReport make_report(double p_star_0, double p_star_1, double p_0_star, double p_1_star,
                        double p_abort) {
    return MeritReport{
        .p_star_0 = p_star_0,
        .p_star_1 = p_star_1,
        .p_0_star = p_0_star,
        .p_1_star = p_1_star,
        .p_abort_honest = p_abort,
        .merit = merit(p_star_0, p_star_1, p_0_star, p_1_star, p_abort),
    };
}

double model_abort_probability(const ExperimentParams& params) {
    return click_probability(derive_intensities(params).mu_leak, params.dark_count_prob);
}

MeritReport merit_from_params(const ExperimentParams& params, std::optional<double> p_abort_override) {
    const double p_abort = p_abort_override ? *p_abort_override : model_abort_probability(params);
    // The protocol is symmetric under relabelling the coin, so both targets
    // share one bound per party.
    const double alice = alice_cheat_bound(params);
    const double bob = bob_cheat_bound(params.alpha_sq);
    return make_report(alice, alice, bob, bob, p_abort);
}

BiasPair bias_from_report(const MeritReport& report) {
    return BiasPair{
        .eps_alice = std::max(report.p_star_0, report.p_star_1) - 0.5,
        .eps_bob = std::max(report.p_0_star, report.p_1_star) - 0.5,
    };
}

AlphaOptimum optimize_alpha(const ExperimentParams& params, double lo, double hi,
                            std::optional<double> p_abort_override) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && hi <= 5.0 && lo < hi)) {
        throw std::invalid_argument("alpha_sq search interval must satisfy 0 < lo < hi <= 5");
    }
    auto value = [&](double alpha_sq) {
        ExperimentParams p = params;
        p.alpha_sq = alpha_sq;
        return merit_from_params(p, p_abort_override).merit;
    };

    const double inv_phi = 1.0 / std::numbers::phi;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = value(c);
    double fd = value(d);
    while (b - a > 1e-7) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value(d);
        }
    }
    const double best = 0.5 * (a + b);
    return AlphaOptimum{.alpha_sq = best, .merit = value(best)};
}

ReferenceValues reference_values() noexcept {
    const double gap = 1.0 - 1.0 / std::numbers::sqrt2;
    return ReferenceValues{
        .quantum_merit_ceiling = gap * gap,
        .ambainis_merit = 1.0 / 16.0,
        .pure_pair_ceiling = gap * gap / 4.0,
        .kitaev_bias = 1.0 / std::numbers::sqrt2,
    };
}

double swept_abort_probability(const ExperimentParams& params, double a_t_db, AbortScaling scaling,
                               std::optional<double> p_abort_override) {
    const double baseline = p_abort_override ? *p_abort_override : model_abort_probability(params);
    require_probability(baseline, "p_abort");
    if (scaling == AbortScaling::FixedMeasured) return baseline;

    // Optical photon number reproducing the baseline on top of the dark
    // counts, then scaled with the channel transmittance relative to the base.
    const double dark = params.dark_count_prob;
    const double optical_mu = std::max(0.0, std::log1p(-dark) - std::log1p(-baseline));
    const double relative = db_to_linear(a_t_db) / db_to_linear(params.att_transmission_db);
    return click_probability(optical_mu * relative, dark);
}

LossSweep loss_sweep(const ExperimentParams& params, const std::vector<double>& a_t_db_grid,
                     AbortScaling scaling, std::optional<double> p_abort_override) {
    if (a_t_db_grid.empty()) throw std::invalid_argument("loss sweep grid is empty");
    params.validate();

    auto report_at = [&](double a_t_db) {
        ExperimentParams p = params;
        p.att_transmission_db = a_t_db;
        return merit_from_params(p, swept_abort_probability(params, a_t_db, scaling, p_abort_override));
    };

    LossSweep sweep;
    sweep.points.reserve(a_t_db_grid.size());
    for (const double db : a_t_db_grid) {
        if (!(std::isfinite(db) && db >= 0.0)) {
            throw std::invalid_argument("loss sweep grid values must be finite and >= 0");
        }
        sweep.points.push_back({db, report_at(db)});
    }

    double lo = 0.0;
    double hi = kSweepUpperDb;
    const bool positive_at_lo = report_at(lo).merit > 0.0;
    if (positive_at_lo != (report_at(hi).merit > 0.0)) {
        while (hi - lo > kThresholdToleranceDb / 4.0) {
            const double mid = 0.5 * (lo + hi);
            if ((report_at(mid).merit > 0.0) == positive_at_lo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        sweep.threshold_db = 0.5 * (lo + hi);
    }
    return sweep;
}

}  // namespace cointoss
