#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adaport {

// Random stream shared by every stochastic component. Determinism is
// defined by this engine's sequence for a given seed.
using Rng = std::mt19937_64;

// Independent stream `stream` for a replication seed. Environments draw
// from stream 0 and policies from stream 1, so policies sharing a seed see
// the same outcome sequence.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

using Arm = std::size_t;

// Binary outcome (0 or 1).
using Bit = std::uint8_t;

// Two arms whose products alpha*beta differ by no more than this are
// treated as tied for the optimum.
inline constexpr double kOptimumTieTolerance = 1e-12;

// Raised when a quantity that needs a unique optimal arm is asked of an
// instance with a tie at the top.
class AmbiguousOptimum : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Per-arm prediction rates (alpha) and transmission rates (beta) of a
// component-wise Bernoulli environment. Immutable after construction.
class BernoulliInstance {
public:
    BernoulliInstance(std::vector<double> alpha, std::vector<double> beta);

    std::size_t arms() const { return alpha_.size(); }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& beta() const { return beta_; }

    // alpha_i * beta_i, the mean reward of arm i.
    double product(Arm i) const { return alpha_.at(i) * beta_.at(i); }

    // The unique arm maximizing alpha*beta. Throws AmbiguousOptimum when
    // the top two products are within kOptimumTieTolerance.
    Arm optimal_arm() const;
    bool has_unique_optimum() const;

private:
    std::vector<double> alpha_;
    std::vector<double> beta_;
};

// {"alpha": [...], "beta": [...]}
BernoulliInstance load_instance(const std::filesystem::path& path);
BernoulliInstance parse_instance(std::string_view json_text);

// Delta_i = alpha_{i*} beta_{i*} - alpha_i beta_i.
double reward_gap(const BernoulliInstance& instance, Arm i);

enum class FeedbackModel {
    OneB,   // z of the chosen arm only
    TwoBB,  // (x, y) of the chosen arm
    TwoFB,  // every x, plus y of the chosen arm
};

std::string_view to_string(FeedbackModel model);
FeedbackModel parse_feedback_model(std::string_view text);

// One timeslot's outcomes. y_all is harness-internal; policies only ever
// receive the slice their feedback model allows (see FeedbackView).
struct ObservationRound {
    std::size_t t = 0;  // 1-based
    std::vector<Bit> x_all;
    std::vector<Bit> y_all;

    Bit reward(Arm chosen) const { return static_cast<Bit>(x_all.at(chosen) & y_all.at(chosen)); }
};

struct RunResult {
    std::vector<double> cumulative_regret;         // length T
    std::vector<std::uint64_t> failed_deliveries;  // length T, cumulative count of z = 0
    std::vector<std::uint64_t> arm_pull_counts;    // length N
    std::uint64_t seed = 0;

    std::size_t horizon() const { return cumulative_regret.size(); }

    // Same data, same seed; bit-exact comparison.
    friend bool operator==(const RunResult&, const RunResult&) = default;
};

}  // namespace adaport
