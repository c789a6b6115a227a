// SPDX-License-Identifier: Apache-2.0
#include "cointoss/protocol.hpp"

#include <cmath>

namespace cointoss {

namespace {

// Relative slack on the intensity constraint for amplitudes computed as sqrt(alpha^2).
constexpr double kIntensitySlack = 1e-12;

double honest_amplitude(Bit a, double magnitude) { return a == Bit::Zero ? magnitude : -magnitude; }

}  // namespace

SessionStreams SessionStreams::derive(std::uint64_t master_seed,
                                      std::uint64_t session_index) noexcept {
    return SessionStreams{
        .alice = Rng(derive_seed(master_seed, session_index, StreamRole::Alice)),
        .bob = Rng(derive_seed(master_seed, session_index, StreamRole::Bob)),
        .channel = Rng(derive_seed(master_seed, session_index, StreamRole::Channel)),
    };
}

ReceivedSignal::ReceivedSignal(double amplitude, const ExperimentParams& params, Rng& channel)
    : amplitude_(amplitude),
      transmittance_(params.total_transmittance()),
      intensities_(derive_intensities(params)),
      dark_count_prob_(params.dark_count_prob),
      channel_(channel) {}

void ReceivedSignal::consume() {
    if (consumed_) throw ProtocolViolation("signal measured more than once");
    consumed_ = true;
}

bool ReceivedSignal::displaced_click(Bit hypothesis) {
    consume();
    const double at_detector = amplitude_ * std::sqrt(transmittance_);
    const double displacement = honest_amplitude(hypothesis, std::sqrt(intensities_.mu_at_detector));
    const double residual = at_detector - displacement;
    const double mu = residual * residual + intensities_.mu_leak;
    const bool click = bernoulli(channel_, click_probability(mu, dark_count_prob_));
    if (verifying_) verification_click_ = click;
    return click;
}

double ReceivedSignal::homodyne_quadrature() {
    consume();
    return 2.0 * amplitude_ + standard_normal(channel_);
}

Transcript run_session(const AliceStrategy& alice, const BobStrategy& bob,
                       const ExperimentParams& params, SessionStreams& streams) {
    const auto alice_session = alice.begin_session();
    const auto bob_session = bob.begin_session();
    Transcript t;

    t.signal_amplitude = alice_session->send_signal(params.alpha_sq, streams.alice);
    if (!std::isfinite(t.signal_amplitude) ||
        t.signal_amplitude * t.signal_amplitude > params.alpha_sq * (1.0 + kIntensitySlack)) {
        throw ProtocolViolation("Alice sent a pulse brighter than alpha_sq");
    }
    ReceivedSignal signal(t.signal_amplitude, params, streams.channel);

    t.bob_bit = bob_session->choose_bit(signal, streams.bob);
    t.alice_bit = alice_session->reveal(t.bob_bit, streams.alice);

    signal.verifying_ = true;
    t.bob_output = bob_session->output(t.bob_bit, t.alice_bit, signal, streams.bob);
    t.detector_clicked = signal.verification_click_.value_or(false);

    t.alice_output = alice_session->output(t.bob_bit, t.alice_bit, t.bob_output == Outcome::Abort);
    return t;
}

Transcript run_session(const AliceStrategy& alice, const BobStrategy& bob,
                       const ExperimentParams& params, std::uint64_t master_seed,
                       std::uint64_t session_index) {
    auto streams = SessionStreams::derive(master_seed, session_index);
    return run_session(alice, bob, params, streams);
}

}  // namespace cointoss
