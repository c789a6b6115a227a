// SPDX-License-Identifier: Apache-2.0
//
// One toss of the single-coin protocol:
//   1. Alice sends a coherent pulse |+alpha> (a = 0) or |-alpha> (a = 1).
//   2. Bob announces a bit b.
//   3. Alice announces a.
//   4. Bob displaces the pulse so that psi_a becomes vacuum and detects;
//      a click means abort, otherwise the coin is a XOR b. Bob's verdict is
//      announced to Alice.
//
// Strategies only see what their party may see at each step. Alice's
// strategy never sees the channel; Bob's strategy holds a ReceivedSignal,
// which answers a single destructive measurement with a click or a
// quadrature value and never exposes the amplitude.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cointoss/optics.hpp"
#include "cointoss/outcome.hpp"
#include "cointoss/rng.hpp"

namespace cointoss {

/// A strategy broke the message order or the physical constraints of the
/// protocol. Always a bug in the strategy, never a protocol outcome.
class ProtocolViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Transcript {
    double signal_amplitude = 0.0;  ///< real amplitude at Alice's output
    Bit bob_bit = Bit::Zero;
    Bit alice_bit = Bit::Zero;
    bool detector_clicked = false;  ///< click during Bob's step-4 verification
    Outcome alice_output = Outcome::Abort;
    Outcome bob_output = Outcome::Abort;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Independent randomness for one session.
struct SessionStreams {
    Rng alice;
    Rng bob;
    Rng channel;

    static SessionStreams derive(std::uint64_t master_seed, std::uint64_t session_index) noexcept;
};

class AliceStrategy;
class BobStrategy;

/// Bob's access to the pulse Alice sent. Admits exactly one measurement.
class ReceivedSignal {
public:
    ReceivedSignal(const ReceivedSignal&) = delete;
    ReceivedSignal& operator=(const ReceivedSignal&) = delete;

    /// Displace by the amount that maps psi_hypothesis to vacuum and detect
    /// through Bob's lossy apparatus. Returns true on a click.
    bool displaced_click(Bit hypothesis);

    /// Ideal homodyne measurement of the pulse at Alice's door, before any
    /// loss. Returns the quadrature sample (mean 2 * amplitude, variance 1).
    double homodyne_quadrature();

    [[nodiscard]] bool consumed() const noexcept { return consumed_; }

private:
    friend Transcript run_session(const AliceStrategy&, const BobStrategy&,
                                  const ExperimentParams&, SessionStreams&);

    ReceivedSignal(double amplitude, const ExperimentParams& params, Rng& channel);
    void consume();

    double amplitude_;
    double transmittance_;
    DerivedIntensities intensities_;
    double dark_count_prob_;
    Rng& channel_;
    bool consumed_ = false;
    bool verifying_ = false;
    std::optional<bool> verification_click_;
};

/// Alice's side of one session; created fresh for every toss.
class AliceSession {
public:
    virtual ~AliceSession() = default;
    /// Step 1. Returns the real amplitude sent; |amplitude|^2 must not exceed alpha_sq.
    virtual double send_signal(double alpha_sq, Rng& rng) = 0;
    /// Step 3.
    virtual Bit reveal(Bit bob_bit, Rng& rng) = 0;
    /// After Bob's verdict.
    virtual Outcome output(Bit bob_bit, Bit revealed, bool bob_aborted) = 0;
};

class BobSession {
public:
    virtual ~BobSession() = default;
    /// Step 2. May measure the signal (at most once over the whole session).
    virtual Bit choose_bit(ReceivedSignal& signal, Rng& rng) = 0;
    /// Step 4.
    virtual Outcome output(Bit bob_bit, Bit revealed, ReceivedSignal& signal, Rng& rng) = 0;
};

class AliceStrategy {
public:
    virtual ~AliceStrategy() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual std::unique_ptr<AliceSession> begin_session() const = 0;
};

class BobStrategy {
public:
    virtual ~BobStrategy() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual std::unique_ptr<BobSession> begin_session() const = 0;
};

/// Execute the four steps in order. Throws ProtocolViolation if a strategy
/// measures twice or sends more than alpha_sq photons on average.
Transcript run_session(const AliceStrategy& alice, const BobStrategy& bob,
                       const ExperimentParams& params, SessionStreams& streams);

Transcript run_session(const AliceStrategy& alice, const BobStrategy& bob,
                       const ExperimentParams& params, std::uint64_t master_seed,
                       std::uint64_t session_index);

// Stock strategies.

std::unique_ptr<AliceStrategy> honest_alice();
std::unique_ptr<BobStrategy> honest_bob();

/// Always sends +sqrt(alpha^2) and reveals a = target XOR b.
std::unique_ptr<AliceStrategy> cheat_alice_fixed_plus(Outcome target);

/// Measures with the a = 0 displacement before step 2: click -> guess a = 1.
/// Sends b = guess XOR target and never aborts.
std::unique_ptr<BobStrategy> cheat_bob_fixed_phase(Outcome target = Outcome::One);

/// Sign of an ideal homodyne quadrature before step 2; never aborts.
std::unique_ptr<BobStrategy> cheat_bob_homodyne(Outcome target = Outcome::One);

/// Names accepted: "honest", "fixed-plus".
std::unique_ptr<AliceStrategy> make_alice_strategy(std::string_view name, Outcome target);
/// Names accepted: "honest", "fixed-phase", "homodyne".
std::unique_ptr<BobStrategy> make_bob_strategy(std::string_view name, Outcome target);

}  // namespace cointoss
