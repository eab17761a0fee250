#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaport/core.hpp"
#include "adaport/traces.hpp"

namespace adaport {

// What a policy is shown after a round. Exactly the fields permitted by
// the feedback model are engaged:
//   1/B    z
//   2/B/B  x_chosen, y_chosen
//   2/F/B  x_all, y_chosen
struct FeedbackView {
    Arm chosen = 0;
    std::optional<std::span<const Bit>> x_all;
    std::optional<Bit> x_chosen;
    std::optional<Bit> y_chosen;
    std::optional<Bit> z;
};

FeedbackView make_view(FeedbackModel model, const ObservationRound& round, Arm chosen);

// Index of the largest score; ties go to the lowest index.
Arm argmax_lowest(std::span<const double> scores);

// ---------------------------------------------------------------------------
// AdaPort: full-information empirical mean of the prediction rate times a
// Thompson sample of the transmission rate.

struct AdaPortState {
    explicit AdaPortState(std::size_t arms)
        : alpha_bar(arms, 0.0), s_beta(arms, 0), f_beta(arms, 0)
    {
    }

    std::vector<double> alpha_bar;
    std::size_t t = 1;
    std::vector<std::uint64_t> s_beta;
    std::vector<std::uint64_t> f_beta;
};

Arm adaport_select(const AdaPortState& state, Rng& rng);
void adaport_update(AdaPortState& state, std::span<const Bit> x_all, Arm chosen, Bit y_chosen);

// ---------------------------------------------------------------------------
// Two-level Thompson sampling, both levels bandit-fed.

struct TwoLevelTsState {
    explicit TwoLevelTsState(std::size_t arms)
        : s_alpha(arms, 0), f_alpha(arms, 0), s_beta(arms, 0), f_beta(arms, 0)
    {
    }

    std::vector<std::uint64_t> s_alpha, f_alpha, s_beta, f_beta;
};

Arm ts2bb_select(const TwoLevelTsState& state, Rng& rng);
void ts2bb_update(TwoLevelTsState& state, Arm chosen, Bit x_chosen, Bit y_chosen);

// ---------------------------------------------------------------------------
// Thompson sampling on the product reward.

struct OneLevelTsState {
    explicit OneLevelTsState(std::size_t arms) : s_z(arms, 0), f_z(arms, 0) {}

    std::vector<std::uint64_t> s_z, f_z;
};

Arm ts1b_select(const OneLevelTsState& state, Rng& rng);
void ts1b_update(OneLevelTsState& state, Arm chosen, Bit z);

// ---------------------------------------------------------------------------
// EXP3 (exponential weights with uniform exploration).

inline constexpr double kExp3RenormalizeAbove = 1e100;
inline constexpr double kExp3DefaultGamma = 0.1;

struct Exp3State {
    Exp3State(std::size_t arms, double gamma);

    std::vector<double> weights;
    double gamma;
};

// min{1, sqrt(N ln N / ((e - 1) T))} for a known horizon, else 0.1.
double exp3_default_gamma(std::size_t arms, std::optional<std::size_t> horizon);

std::vector<double> exp3_probabilities(const Exp3State& state);
Arm exp3_select(const Exp3State& state, Rng& rng);
void exp3_update(Exp3State& state, Arm chosen, Bit z);

// ---------------------------------------------------------------------------

// Smallest portion, always.
inline Arm heuristic_select() { return 0; }

// Static best arm: i* of a known instance, or the arm with the most
// rewarded rounds in a known trace (lowest index on ties).
Arm oracle_arm(const BernoulliInstance& instance);
Arm oracle_arm(const traces::FeedbackMatrices& matrices);

// ---------------------------------------------------------------------------
// Runtime-polymorphic wrapper used by the harness and the CLI.

class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string_view name() const = 0;
    virtual bool accepts(FeedbackModel model) const = 0;
    virtual Arm select(Rng& rng) = 0;
    virtual void observe(const FeedbackView& view) = 0;
};

struct PolicyContext {
    std::size_t arms = 0;
    std::optional<std::size_t> horizon;  // for EXP3 tuning
    std::optional<Arm> oracle;           // required by "oracle"
    std::optional<double> exp3_gamma;    // overrides the default tuning
};

// Registry names: adaport, ts1b, ts2bb, exp3, heuristic, oracle.
std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyContext& ctx);
const std::vector<std::string>& policy_names();

// The model each learning policy is designed for; oracle and heuristic
// report 2/F/B but accept any model.
FeedbackModel default_feedback_model(std::string_view name);

}  // namespace adaport
