// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>
#include <string>

#include "cointoss/protocol.hpp"

namespace cointoss {

namespace {

Bit random_bit(Rng& rng) { return (rng() >> 63) != 0 ? Bit::One : Bit::Zero; }

Bit target_bit(Outcome target) {
    const auto bit = to_bit(target);
    if (!bit) throw std::invalid_argument("cheat target must be 0 or 1");
    return *bit;
}

class HonestAliceSession final : public AliceSession {
public:
    double send_signal(double alpha_sq, Rng& rng) override {
        a_ = random_bit(rng);
        const double magnitude = std::sqrt(alpha_sq);
        return a_ == Bit::Zero ? magnitude : -magnitude;
    }
    Bit reveal(Bit, Rng&) override { return a_; }
    Outcome output(Bit bob_bit, Bit revealed, bool bob_aborted) override {
        return bob_aborted ? Outcome::Abort : to_outcome(revealed ^ bob_bit);
    }

private:
    Bit a_ = Bit::Zero;
};

class HonestAlice final : public AliceStrategy {
public:
    std::string name() const override { return "honest"; }
    std::unique_ptr<AliceSession> begin_session() const override {
        return std::make_unique<HonestAliceSession>();
    }
};

class HonestBobSession final : public BobSession {
public:
    Bit choose_bit(ReceivedSignal&, Rng& rng) override { return random_bit(rng); }
    Outcome output(Bit bob_bit, Bit revealed, ReceivedSignal& signal, Rng&) override {
        return signal.displaced_click(revealed) ? Outcome::Abort : to_outcome(revealed ^ bob_bit);
    }
};

class HonestBob final : public BobStrategy {
public:
    std::string name() const override { return "honest"; }
    std::unique_ptr<BobSession> begin_session() const override {
        return std::make_unique<HonestBobSession>();
    }
};

class FixedPlusAliceSession final : public AliceSession {
public:
    explicit FixedPlusAliceSession(Bit target) : target_(target) {}
    double send_signal(double alpha_sq, Rng&) override { return std::sqrt(alpha_sq); }
    Bit reveal(Bit bob_bit, Rng&) override { return target_ ^ bob_bit; }
    Outcome output(Bit, Bit, bool) override { return to_outcome(target_); }

private:
    Bit target_;
};

class FixedPlusAlice final : public AliceStrategy {
public:
    explicit FixedPlusAlice(Bit target) : target_(target) {}
    std::string name() const override { return "fixed-plus"; }
    std::unique_ptr<AliceSession> begin_session() const override {
        return std::make_unique<FixedPlusAliceSession>(target_);
    }

private:
    Bit target_;
};

/// Guesses a before step 2 and steers b; output claimed is the target.
template <class Guess>
class GuessingBobSession final : public BobSession {
public:
    explicit GuessingBobSession(Bit target) : target_(target) {}
    Bit choose_bit(ReceivedSignal& signal, Rng&) override { return Guess{}(signal) ^ target_; }
    Outcome output(Bit, Bit, ReceivedSignal&, Rng&) override { return to_outcome(target_); }

private:
    Bit target_;
};

struct FixedPhaseGuess {
    Bit operator()(ReceivedSignal& signal) const {
        return signal.displaced_click(Bit::Zero) ? Bit::One : Bit::Zero;
    }
};

struct HomodyneGuess {
    Bit operator()(ReceivedSignal& signal) const {
        return signal.homodyne_quadrature() < 0.0 ? Bit::One : Bit::Zero;
    }
};

template <class Guess>
class GuessingBob final : public BobStrategy {
public:
    GuessingBob(std::string name, Bit target) : name_(std::move(name)), target_(target) {}
    std::string name() const override { return name_; }
    std::unique_ptr<BobSession> begin_session() const override {
        return std::make_unique<GuessingBobSession<Guess>>(target_);
    }

private:
    std::string name_;
    Bit target_;
};

}  // namespace

std::unique_ptr<AliceStrategy> honest_alice() { return std::make_unique<HonestAlice>(); }

std::unique_ptr<BobStrategy> honest_bob() { return std::make_unique<HonestBob>(); }

std::unique_ptr<AliceStrategy> cheat_alice_fixed_plus(Outcome target) {
    return std::make_unique<FixedPlusAlice>(target_bit(target));
}

std::unique_ptr<BobStrategy> cheat_bob_fixed_phase(Outcome target) {
    return std::make_unique<GuessingBob<FixedPhaseGuess>>("fixed-phase", target_bit(target));
}

std::unique_ptr<BobStrategy> cheat_bob_homodyne(Outcome target) {
    return std::make_unique<GuessingBob<HomodyneGuess>>("homodyne", target_bit(target));
}

std::unique_ptr<AliceStrategy> make_alice_strategy(std::string_view name, Outcome target) {
    if (name == "honest") return honest_alice();
    if (name == "fixed-plus") return cheat_alice_fixed_plus(target);
    throw std::invalid_argument("unknown Alice strategy '" + std::string(name) + "'");
}

std::unique_ptr<BobStrategy> make_bob_strategy(std::string_view name, Outcome target) {
    if (name == "honest") return honest_bob();
    if (name == "fixed-phase") return cheat_bob_fixed_phase(target);
    if (name == "homodyne") return cheat_bob_homodyne(target);
    throw std::invalid_argument("unknown Bob strategy '" + std::string(name) + "'");
}

}  // namespace cointoss
