// SPDX-License-Identifier: Apache-2.0
//
// Coherent-state kernel: overlaps, discrimination bounds, the imperfection
// model of the detection apparatus and the threshold-detector click model.
// Everything here is a pure function of its arguments.
#pragma once

namespace cointoss {

/// Physical-layer parameters of one experiment.
///
/// Losses are stored as positive dB (6 means a factor 10^-0.6 on intensity).
/// `qber_per_photon` is q; the interference visibility is derived as 1 - 2q.
struct ExperimentParams {
    double alpha_sq = 0.0;              ///< mean photon number at Alice's output
    double att_transmission_db = 0.0;   ///< A_T, channel loss
    double att_bob_db = 0.0;            ///< A_B, loss inside Bob's apparatus
    double detector_efficiency = 1.0;   ///< eta
    double qber_per_photon = 0.0;       ///< q
    double dark_count_prob = 0.0;       ///< per detection gate

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;

    [[nodiscard]] double visibility() const noexcept { return 1.0 - 2.0 * qber_per_photon; }

    /// Linear transmittance A_T * A_B * eta from Alice's output to the detector.
    [[nodiscard]] double total_transmittance() const;

    /// Operating point of the fiber experiment: alpha^2 = 0.27, A_T = 0 dB,
    /// A_B = 6 dB, eta = 10 %, q = 5e-3, dark counts 4.7e-5 per gate.
    static ExperimentParams reference_experiment() noexcept;

    /// Lossless, noiseless apparatus with unit efficiency.
    static ExperimentParams ideal(double alpha_sq) noexcept;
};

/// Mean photon numbers derived from ExperimentParams.
struct DerivedIntensities {
    double mu_at_detector = 0.0;       ///< alpha^2 * A_T * A_B * eta
    double mu_leak = 0.0;              ///< q * mu_at_detector, honest residual after displacement
    double effective_intensity = 0.0;  ///< A_B * A_T * eta * (1 - 2 sqrt(q)) * alpha^2
};

/// 10^(-db/10). Throws std::invalid_argument for negative or non-finite db.
double db_to_linear(double db);

/// Inverse of db_to_linear for transmittances in (0, 1].
double linear_to_db(double transmittance);

/// |<-alpha|+alpha>|^2 = exp(-4 alpha^2).
double overlap_sq(double alpha_sq);

/// Optimal (Helstrom) success probability for two equiprobable pure states
/// with squared overlap `overlap_sq`.
double helstrom_success(double overlap_sq);

/// Success of a cheater who sends the fixed state N(|psi0> + |psi1>) and
/// reveals whichever bit wins: 1/2 + overlap/2, where overlap = |<psi1|psi0>|.
double fixed_state_cheat_success(double overlap);

/// Upper bound on a dishonest Alice forcing honest Bob's output.
///
/// All of Bob's losses and the detector inefficiency are handed to Alice
/// (a lossless fictitious Bob), and finite visibility shrinks the distance
/// between the projection states, so alpha^2 is replaced by the effective
/// intensity of DerivedIntensities: 1/2 + exp(-effective)/2.
///
/// With a lossless, noiseless apparatus the overlap |<-alpha|+alpha>| =
/// exp(-2 alpha^2) is used directly instead.
double alice_cheat_bound(const ExperimentParams& params);

/// Upper bound on a dishonest Bob forcing honest Alice's output. Only alpha^2
/// enters: Bob may intercept at Alice's door with ideal equipment, and the
/// two coherent states of intensity alpha^2 overlap by at least exp(-2 alpha^2).
double bob_cheat_bound(double alpha_sq);

/// Threshold detector on a coherent state with independent dark counts:
/// 1 - (1 - p_dark) exp(-mu).
double click_probability(double mean_photons, double dark_count_prob);

DerivedIntensities derive_intensities(const ExperimentParams& params);

/// Sign-of-quadrature discrimination of |+alpha> vs |-alpha>. The quadrature
/// is Gaussian with mean +-2 alpha and unit (vacuum) variance, so the success
/// probability is Phi(2 sqrt(alpha^2)).
double homodyne_success(double alpha_sq);

/// Standard normal CDF.
double standard_normal_cdf(double x);

}  // namespace cointoss
