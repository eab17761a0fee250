#include "adaport/environments.hpp"

#include <algorithm>

#include "adaport/policies.hpp"

namespace adaport {

SyntheticEnv::SyntheticEnv(BernoulliInstance instance, std::uint64_t seed)
    : instance_(std::move(instance)), optimal_(instance_.optimal_arm()), rng_(make_rng(seed, 0))
{
    gaps_.resize(instance_.arms());
    for (Arm i = 0; i < gaps_.size(); ++i)
        gaps_[i] = reward_gap(instance_, i);
}

std::vector<Bit> SyntheticEnv::draw_transmissions()
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Bit> y(instance_.arms());
    for (Arm i = 0; i < y.size(); ++i)
        y[i] = static_cast<Bit>(unit(rng_) < instance_.beta()[i]);
    return y;
}

std::optional<ObservationRound> SyntheticEnv::next()
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ObservationRound r;
    r.t = ++t_;
    r.x_all.resize(instance_.arms());
    for (Arm i = 0; i < r.x_all.size(); ++i)
        r.x_all[i] = static_cast<Bit>(unit(rng_) < instance_.alpha()[i]);
    r.y_all = draw_transmissions();
    return r;
}

double SyntheticEnv::regret(const ObservationRound&, Arm chosen) const
{
    return gaps_.at(chosen);
}

CorrelatedSyntheticEnv::CorrelatedSyntheticEnv(BernoulliInstance instance, std::uint64_t seed)
    : SyntheticEnv(std::move(instance), seed)
{
    const auto& a = instance_.alpha();
    if (!std::is_sorted(a.begin(), a.end()))
        throw std::invalid_argument("correlated prediction outcomes need alpha nondecreasing in arm order");
}

std::optional<ObservationRound> CorrelatedSyntheticEnv::next()
{
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    ObservationRound r;
    r.t = ++t_;
    r.x_all.resize(instance_.arms());
    for (Arm i = 0; i < r.x_all.size(); ++i)
        r.x_all[i] = static_cast<Bit>(u < instance_.alpha()[i]);
    r.y_all = draw_transmissions();
    return r;
}

ReplayEnv::ReplayEnv(std::shared_ptr<const traces::FeedbackMatrices> matrices)
    : matrices_(std::move(matrices))
{
    if (!matrices_ || matrices_->n_arms() == 0)
        throw std::invalid_argument("replay needs nonempty feedback matrices");
    oracle_ = oracle_arm(*matrices_);
}

std::optional<ObservationRound> ReplayEnv::next()
{
    if (cursor_ >= matrices_->t_count())
        return std::nullopt;
    ObservationRound r;
    r.t = cursor_ + 1;
    const auto x = matrices_->x_row(cursor_);
    const auto y = matrices_->y_row(cursor_);
    r.x_all.assign(x.begin(), x.end());
    r.y_all.assign(y.begin(), y.end());
    ++cursor_;
    return r;
}

double ReplayEnv::regret(const ObservationRound& round, Arm chosen) const
{
    return static_cast<double>(round.reward(oracle_)) - static_cast<double>(round.reward(chosen));
}

}  // namespace adaport
