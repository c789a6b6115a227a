// SPDX-License-Identifier: Apache-2.0
#include "cointoss/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cointoss {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void ExperimentParams::validate() const {
    require(std::isfinite(alpha_sq) && alpha_sq >= 0.0, "alpha_sq must be finite and >= 0");
    require(std::isfinite(att_transmission_db) && att_transmission_db >= 0.0,
            "att_transmission_db must be finite and >= 0");
    require(std::isfinite(att_bob_db) && att_bob_db >= 0.0, "att_bob_db must be finite and >= 0");
    require(is_probability(detector_efficiency), "detector_efficiency must lie in [0, 1]");
    require(is_probability(qber_per_photon), "qber_per_photon must lie in [0, 1]");
    require(is_probability(dark_count_prob) && dark_count_prob < 1.0,
            "dark_count_prob must lie in [0, 1)");
}

double ExperimentParams::total_transmittance() const {
    return db_to_linear(att_transmission_db) * db_to_linear(att_bob_db) * detector_efficiency;
}

ExperimentParams ExperimentParams::reference_experiment() noexcept {
    return ExperimentParams{
        .alpha_sq = 0.27,
        .att_transmission_db = 0.0,
        .att_bob_db = 6.0,
        .detector_efficiency = 0.1,
        .qber_per_photon = 5e-3,
        .dark_count_prob = 4.7e-5,
    };
}

ExperimentParams ExperimentParams::ideal(double alpha_sq) noexcept {
    return ExperimentParams{.alpha_sq = alpha_sq};
}

double db_to_linear(double db) {
    require(std::isfinite(db) && db >= 0.0, "attenuation in dB must be finite and >= 0");
    return std::pow(10.0, -db / 10.0);
}

double linear_to_db(double transmittance) {
    require(std::isfinite(transmittance) && transmittance > 0.0 && transmittance <= 1.0,
            "transmittance must lie in (0, 1]");
    return -10.0 * std::log10(transmittance);
}

double overlap_sq(double alpha_sq) {
    require(alpha_sq >= 0.0, "alpha_sq must be >= 0");
    return std::exp(-4.0 * alpha_sq);
}

double helstrom_success(double overlap_sq) {
    require(is_probability(overlap_sq), "squared overlap must lie in [0, 1]");
    return 0.5 + 0.5 * std::sqrt(1.0 - overlap_sq);
}

double fixed_state_cheat_success(double overlap) {
    require(is_probability(overlap), "overlap must lie in [0, 1]");
    return 0.5 + 0.5 * overlap;
}

DerivedIntensities derive_intensities(const ExperimentParams& params) {
    params.validate();
    const double mu = params.alpha_sq * params.total_transmittance();
    const double q = params.qber_per_photon;
    return DerivedIntensities{
        .mu_at_detector = mu,
        .mu_leak = q * mu,
        .effective_intensity = mu * (1.0 - 2.0 * std::sqrt(q)),
    };
}

double alice_cheat_bound(const ExperimentParams& params) {
    // In the fictitious lossless system the projection states sit at
    // +-alpha_fict + delta, and |delta_+ - delta_-| <= 2 sqrt(q) |alpha_fict|.
    // The distance bound can go negative for q > 1/4; the overlap is capped at 1.
    const double effective = derive_intensities(params).effective_intensity;
    if (params.total_transmittance() == 1.0 && params.qber_per_photon == 0.0) {
        // Perfect apparatus: the states are exactly |+-alpha>, no reduction needed.
        return fixed_state_cheat_success(std::exp(-2.0 * params.alpha_sq));
    }
    return fixed_state_cheat_success(std::min(1.0, std::exp(-effective)));
}

double bob_cheat_bound(double alpha_sq) { return helstrom_success(overlap_sq(alpha_sq)); }

double click_probability(double mean_photons, double dark_count_prob) {
    require(std::isfinite(mean_photons) && mean_photons >= 0.0, "mean photon number must be >= 0");
    require(is_probability(dark_count_prob) && dark_count_prob < 1.0,
            "dark_count_prob must lie in [0, 1)");
    // -expm1 keeps precision for the ~1e-5 photon numbers of the honest leak.
    return dark_count_prob - (1.0 - dark_count_prob) * std::expm1(-mean_photons);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double homodyne_success(double alpha_sq) {
    require(alpha_sq >= 0.0, "alpha_sq must be >= 0");
    return standard_normal_cdf(2.0 * std::sqrt(alpha_sq));
}

}  // namespace cointoss
