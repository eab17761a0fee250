#pragma once

#include <memory>
#include <optional>

#include "adaport/core.hpp"
#include "adaport/traces.hpp"

namespace adaport {

// Source of per-round outcomes. The harness asks the environment for the
// regret of a choice so synthetic and trace runs share one loop.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::size_t arms() const = 0;

    // Outcomes of the next timeslot, or nullopt once the stream is exhausted.
    virtual std::optional<ObservationRound> next() = 0;

    // Regret charged for playing `chosen` in `round`.
    virtual double regret(const ObservationRound& round, Arm chosen) const = 0;

    // The arm the clairvoyant static policy plays.
    virtual Arm oracle() const = 0;
};

// Independent Bernoulli draws: x_i ~ Bern(alpha_i), y_i ~ Bern(beta_i),
// independent across arms, levels and rounds. Regret is the gap Delta of
// the chosen arm.
class SyntheticEnv : public Environment {
public:
    SyntheticEnv(BernoulliInstance instance, std::uint64_t seed);

    std::size_t arms() const override { return instance_.arms(); }
    std::optional<ObservationRound> next() override;
    double regret(const ObservationRound& round, Arm chosen) const override;
    Arm oracle() const override { return optimal_; }

    const BernoulliInstance& instance() const { return instance_; }

protected:
    std::vector<Bit> draw_transmissions();

    BernoulliInstance instance_;
    Arm optimal_;
    std::vector<double> gaps_;
    Rng rng_;
    std::size_t t_ = 0;
};

// Prediction outcomes driven by one shared error magnitude per round, so
// larger (later) portions cover whenever smaller ones do:
// x_i = 1 iff U < alpha_i, U ~ Uniform(0,1). Marginals equal alpha_i; alpha
// must be nondecreasing in arm order.
class CorrelatedSyntheticEnv final : public SyntheticEnv {
public:
    CorrelatedSyntheticEnv(BernoulliInstance instance, std::uint64_t seed);

    std::optional<ObservationRound> next() override;
};

// Replays precomputed matrices in order. Regret is the trace-oracle arm's
// realized reward minus the chosen arm's.
class ReplayEnv final : public Environment {
public:
    explicit ReplayEnv(std::shared_ptr<const traces::FeedbackMatrices> matrices);

    std::size_t arms() const override { return matrices_->n_arms(); }
    std::optional<ObservationRound> next() override;
    double regret(const ObservationRound& round, Arm chosen) const override;
    Arm oracle() const override { return oracle_; }

    std::size_t cursor() const { return cursor_; }

private:
    std::shared_ptr<const traces::FeedbackMatrices> matrices_;
    Arm oracle_;
    std::size_t cursor_ = 0;
};

}  // namespace adaport
