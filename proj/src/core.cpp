#include "adaport/core.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace adaport {

BernoulliInstance::BernoulliInstance(std::vector<double> alpha, std::vector<double> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta))
{
    if (alpha_.size() != beta_.size())
        throw std::invalid_argument("alpha and beta must have equal length");
    if (alpha_.size() < 2)
        throw std::invalid_argument("an instance needs at least two arms");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!std::all_of(alpha_.begin(), alpha_.end(), in_unit) ||
        !std::all_of(beta_.begin(), beta_.end(), in_unit))
        throw std::invalid_argument("rates must lie in [0,1]");
}

bool BernoulliInstance::has_unique_optimum() const
{
    double best = -1.0, second = -1.0;
    for (Arm i = 0; i < arms(); ++i) {
        const double p = product(i);
        if (p > best) {
            second = best;
            best = p;
        } else if (p > second) {
            second = p;
        }
    }
    return best - second > kOptimumTieTolerance;
}

Arm BernoulliInstance::optimal_arm() const
{
    if (!has_unique_optimum())
        throw AmbiguousOptimum("ambiguous optimum: two arms tie for the largest alpha*beta");
    Arm best = 0;
    for (Arm i = 1; i < arms(); ++i)
        if (product(i) > product(best))
            best = i;
    return best;
}

BernoulliInstance parse_instance(std::string_view json_text)
{
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.contains("alpha") || !doc.contains("beta"))
        throw std::invalid_argument("instance JSON needs \"alpha\" and \"beta\" arrays");
    return BernoulliInstance(doc.at("alpha").get<std::vector<double>>(),
                             doc.at("beta").get<std::vector<double>>());
}

BernoulliInstance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

double reward_gap(const BernoulliInstance& instance, Arm i)
{
    const Arm star = instance.optimal_arm();
    if (i >= instance.arms())
        throw std::out_of_range("arm index out of range");
    if (i == star)
        return 0.0;
    return instance.product(star) - instance.product(i);
}

std::string_view to_string(FeedbackModel model)
{
    switch (model) {
    case FeedbackModel::OneB: return "1/B";
    case FeedbackModel::TwoBB: return "2/B/B";
    case FeedbackModel::TwoFB: return "2/F/B";
    }
    return "?";
}

FeedbackModel parse_feedback_model(std::string_view text)
{
    if (text == "1/B" || text == "OneB" || text == "1b")
        return FeedbackModel::OneB;
    if (text == "2/B/B" || text == "TwoBB" || text == "2bb")
        return FeedbackModel::TwoBB;
    if (text == "2/F/B" || text == "TwoFB" || text == "2fb")
        return FeedbackModel::TwoFB;
    throw std::invalid_argument("unknown feedback model: " + std::string(text));
}

}  // namespace adaport
