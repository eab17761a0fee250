#include "adaport/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "adaport/mathlib.hpp"

namespace adaport {
namespace {

void check_arm(Arm chosen, std::size_t arms)
{
    if (chosen >= arms)
        throw std::out_of_range("chosen arm out of range");
}

double posterior_draw(std::uint64_t successes, std::uint64_t failures, Rng& rng)
{
    return math::sample_beta(static_cast<double>(successes) + 1.0, static_cast<double>(failures) + 1.0, rng);
}

Bit require(const std::optional<Bit>& field, const char* what)
{
    if (!field)
        throw std::logic_error(std::string("feedback view lacks ") + what);
    return *field;
}

}  // namespace

FeedbackView make_view(FeedbackModel model, const ObservationRound& round, Arm chosen)
{
    check_arm(chosen, round.x_all.size());
    FeedbackView v;
    v.chosen = chosen;
    switch (model) {
    case FeedbackModel::OneB:
        v.z = round.reward(chosen);
        break;
    case FeedbackModel::TwoBB:
        v.x_chosen = round.x_all[chosen];
        v.y_chosen = round.y_all[chosen];
        break;
    case FeedbackModel::TwoFB:
        v.x_all = std::span<const Bit>(round.x_all);
        v.y_chosen = round.y_all[chosen];
        break;
    }
    return v;
}

Arm argmax_lowest(std::span<const double> scores)
{
    Arm best = 0;
    for (Arm i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best])
            best = i;
    return best;
}

Arm adaport_select(const AdaPortState& state, Rng& rng)
{
    std::vector<double> scores(state.alpha_bar.size());
    for (Arm i = 0; i < scores.size(); ++i)
        scores[i] = state.alpha_bar[i] * posterior_draw(state.s_beta[i], state.f_beta[i], rng);
    return argmax_lowest(scores);
}

void adaport_update(AdaPortState& state, std::span<const Bit> x_all, Arm chosen, Bit y_chosen)
{
    const std::size_t n = state.alpha_bar.size();
    if (x_all.size() != n)
        throw std::invalid_argument("x_all length differs from the number of arms");
    check_arm(chosen, n);
    const double inv_t = 1.0 / static_cast<double>(state.t);
    for (Arm i = 0; i < n; ++i)
        state.alpha_bar[i] += (static_cast<double>(x_all[i]) - state.alpha_bar[i]) * inv_t;
    if (y_chosen)
        ++state.s_beta[chosen];
    else
        ++state.f_beta[chosen];
    ++state.t;
}

Arm ts2bb_select(const TwoLevelTsState& state, Rng& rng)
{
    std::vector<double> scores(state.s_alpha.size());
    for (Arm i = 0; i < scores.size(); ++i) {
        const double theta_alpha = posterior_draw(state.s_alpha[i], state.f_alpha[i], rng);
        const double theta_beta = posterior_draw(state.s_beta[i], state.f_beta[i], rng);
        scores[i] = theta_alpha * theta_beta;
    }
    return argmax_lowest(scores);
}

void ts2bb_update(TwoLevelTsState& state, Arm chosen, Bit x_chosen, Bit y_chosen)
{
    check_arm(chosen, state.s_alpha.size());
    ++(x_chosen ? state.s_alpha : state.f_alpha)[chosen];
    ++(y_chosen ? state.s_beta : state.f_beta)[chosen];
}

Arm ts1b_select(const OneLevelTsState& state, Rng& rng)
{
    std::vector<double> scores(state.s_z.size());
    for (Arm i = 0; i < scores.size(); ++i)
        scores[i] = posterior_draw(state.s_z[i], state.f_z[i], rng);
    return argmax_lowest(scores);
}

void ts1b_update(OneLevelTsState& state, Arm chosen, Bit z)
{
    check_arm(chosen, state.s_z.size());
    ++(z ? state.s_z : state.f_z)[chosen];
}

Exp3State::Exp3State(std::size_t arms, double gamma_) : weights(arms, 1.0), gamma(gamma_)
{
    if (arms == 0)
        throw std::invalid_argument("EXP3 needs at least one arm");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("EXP3 gamma must lie in (0,1]");
}

double exp3_default_gamma(std::size_t arms, std::optional<std::size_t> horizon)
{
    if (!horizon || *horizon == 0)
        return kExp3DefaultGamma;
    const double n = static_cast<double>(arms);
    const double g = std::sqrt(n * std::log(n) / ((std::numbers::e - 1.0) * static_cast<double>(*horizon)));
    return std::clamp(g, std::numeric_limits<double>::min(), 1.0);
}

std::vector<double> exp3_probabilities(const Exp3State& state)
{
    const double n = static_cast<double>(state.weights.size());
    const double total = std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
    std::vector<double> p(state.weights.size());
    for (Arm i = 0; i < p.size(); ++i)
        p[i] = (1.0 - state.gamma) * state.weights[i] / total + state.gamma / n;
    return p;
}

Arm exp3_select(const Exp3State& state, Rng& rng)
{
    const auto p = exp3_probabilities(state);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cumulative = 0.0;
    for (Arm i = 0; i + 1 < p.size(); ++i) {
        cumulative += p[i];
        if (u < cumulative)
            return i;
    }
    return p.size() - 1;
}

void exp3_update(Exp3State& state, Arm chosen, Bit z)
{
    check_arm(chosen, state.weights.size());
    if (!z)
        return;
    const double p_chosen = exp3_probabilities(state)[chosen];
    const double estimate = 1.0 / p_chosen;
    state.weights[chosen] *= std::exp(state.gamma * estimate / static_cast<double>(state.weights.size()));

    const double top = *std::max_element(state.weights.begin(), state.weights.end());
    if (top > kExp3RenormalizeAbove) {
        for (double& w : state.weights)
            w = std::max(w / top, std::numeric_limits<double>::min());
    }
}

Arm oracle_arm(const BernoulliInstance& instance)
{
    return instance.optimal_arm();
}

Arm oracle_arm(const traces::FeedbackMatrices& matrices)
{
    if (matrices.n_arms() == 0)
        throw std::invalid_argument("empty feedback matrices");
    Arm best = 0;
    std::uint64_t best_total = matrices.reward_total(0);
    for (Arm i = 1; i < matrices.n_arms(); ++i) {
        const auto total = matrices.reward_total(i);
        if (total > best_total) {
            best_total = total;
            best = i;
        }
    }
    return best;
}

namespace {

class AdaPortPolicy final : public Policy {
public:
    explicit AdaPortPolicy(std::size_t arms) : state_(arms) {}
    std::string_view name() const override { return "adaport"; }
    bool accepts(FeedbackModel m) const override { return m == FeedbackModel::TwoFB; }
    Arm select(Rng& rng) override { return adaport_select(state_, rng); }
    void observe(const FeedbackView& v) override
    {
        if (!v.x_all)
            throw std::logic_error("feedback view lacks x_all");
        adaport_update(state_, *v.x_all, v.chosen, require(v.y_chosen, "y_chosen"));
    }

private:
    AdaPortState state_;
};

class TwoLevelTsPolicy final : public Policy {
public:
    explicit TwoLevelTsPolicy(std::size_t arms) : state_(arms) {}
    std::string_view name() const override { return "ts2bb"; }
    bool accepts(FeedbackModel m) const override { return m == FeedbackModel::TwoBB; }
    Arm select(Rng& rng) override { return ts2bb_select(state_, rng); }
    void observe(const FeedbackView& v) override
    {
        ts2bb_update(state_, v.chosen, require(v.x_chosen, "x_chosen"), require(v.y_chosen, "y_chosen"));
    }

private:
    TwoLevelTsState state_;
};

class OneLevelTsPolicy final : public Policy {
public:
    explicit OneLevelTsPolicy(std::size_t arms) : state_(arms) {}
    std::string_view name() const override { return "ts1b"; }
    bool accepts(FeedbackModel m) const override { return m == FeedbackModel::OneB; }
    Arm select(Rng& rng) override { return ts1b_select(state_, rng); }
    void observe(const FeedbackView& v) override { ts1b_update(state_, v.chosen, require(v.z, "z")); }

private:
    OneLevelTsState state_;
};

class Exp3Policy final : public Policy {
public:
    Exp3Policy(std::size_t arms, double gamma) : state_(arms, gamma) {}
    std::string_view name() const override { return "exp3"; }
    bool accepts(FeedbackModel m) const override { return m == FeedbackModel::OneB; }
    Arm select(Rng& rng) override { return exp3_select(state_, rng); }
    void observe(const FeedbackView& v) override { exp3_update(state_, v.chosen, require(v.z, "z")); }

private:
    Exp3State state_;
};

class FixedArmPolicy final : public Policy {
public:
    FixedArmPolicy(std::string name, Arm arm) : name_(std::move(name)), arm_(arm) {}
    std::string_view name() const override { return name_; }
    bool accepts(FeedbackModel) const override { return true; }
    Arm select(Rng&) override { return arm_; }
    void observe(const FeedbackView&) override {}

private:
    std::string name_;
    Arm arm_;
};

}  // namespace

const std::vector<std::string>& policy_names()
{
    static const std::vector<std::string> names = {"adaport", "ts1b", "ts2bb", "exp3", "heuristic", "oracle"};
    return names;
}

std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyContext& ctx)
{
    if (ctx.arms < 1)
        throw std::invalid_argument("policy needs at least one arm");
    if (name == "adaport")
        return std::make_unique<AdaPortPolicy>(ctx.arms);
    if (name == "ts2bb")
        return std::make_unique<TwoLevelTsPolicy>(ctx.arms);
    if (name == "ts1b")
        return std::make_unique<OneLevelTsPolicy>(ctx.arms);
    if (name == "exp3")
        return std::make_unique<Exp3Policy>(ctx.arms, ctx.exp3_gamma.value_or(exp3_default_gamma(ctx.arms, ctx.horizon)));
    if (name == "heuristic")
        return std::make_unique<FixedArmPolicy>("heuristic", heuristic_select());
    if (name == "oracle") {
        if (!ctx.oracle)
            throw std::invalid_argument("oracle policy needs the optimal arm");
        check_arm(*ctx.oracle, ctx.arms);
        return std::make_unique<FixedArmPolicy>("oracle", *ctx.oracle);
    }
    throw std::invalid_argument("unknown policy: " + std::string(name));
}

FeedbackModel default_feedback_model(std::string_view name)
{
    if (name == "ts1b" || name == "exp3")
        return FeedbackModel::OneB;
    if (name == "ts2bb")
        return FeedbackModel::TwoBB;
    if (name == "adaport" || name == "heuristic" || name == "oracle")
        return FeedbackModel::TwoFB;
    throw std::invalid_argument("unknown policy: " + std::string(name));
}

}  // namespace adaport
