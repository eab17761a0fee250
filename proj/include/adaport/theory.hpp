#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adaport/core.hpp"

namespace adaport::theory {

// Per-arm contributions Delta_i / divergence for each feedback model.
// The optimal arm's entries are 0.
struct ArmTerms {
    std::vector<double> two_fb;
    std::vector<double> two_bb;
    std::vector<double> one_b;
};

// Coefficients of log T in the asymptotic regret lower bounds, in nats.
// For any valid instance c_2fb <= c_2bb <= c_1b.
struct BoundReport {
    double c_2fb = 0.0;
    double c_2bb = 0.0;
    double c_1b = 0.0;
    ArmTerms per_arm;
};

// Hybrid (full-information prediction, bandit transmission) constant:
// sum over suboptimal arms with alpha_i > alpha*beta* of
// Delta_i / d(beta_i, alpha*beta* / alpha_i). Other arms contribute 0.
double constant_2fb(const BernoulliInstance& instance);

// Two-level bandit constant: Delta_i over
// min_{x,y in [0,1], xy >= c} d(alpha_i, x) + d(beta_i, y).
double constant_2bb(const BernoulliInstance& instance);

// Single-level bandit constant: Delta_i / d(alpha_i beta_i, c).
double constant_1b(const BernoulliInstance& instance);

BoundReport bound_report(const BernoulliInstance& instance);

// min over xy >= threshold of d(alpha, x) + d(beta, y), for an arm with
// alpha*beta < threshold. On the active constraint y = threshold / x the
// problem is one-dimensional in x in [threshold, 1]; solved by a 2000-point
// grid scan followed by golden-section refinement around the best cell.
double two_level_divergence(double alpha, double beta, double threshold);

// min over xy >= threshold of d(alpha*beta, xy); attained at xy = threshold.
double product_divergence(double alpha, double beta, double threshold);

struct RatePair {
    double alpha = 0.0;
    double beta = 0.0;
};

// One row of a two-arm sweep. `status` is "ok" or the reason the constants
// could not be computed; invalid rows keep their place in the table.
struct SweepRow {
    RatePair sub;
    BoundReport report;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

// Two-arm instances {optimal, sub} for each entry of `varying`.
std::vector<SweepRow> sweep_two_arm(RatePair optimal, const std::vector<RatePair>& varying);

// Grids of the two published two-arm comparisons (optimal arm 0.8 / 0.9).
// Panel 'a' fixes the suboptimal beta at 0.8 and varies alpha; panel 'b'
// fixes the suboptimal alpha at 0.75 and varies beta.
std::vector<RatePair> figure_grid(char panel);
inline constexpr RatePair kFigureOptimalArm{0.8, 0.9};

// CSV with columns alpha_sub,beta_sub,c_2fb,c_2bb,c_1b,status. When
// `log2` is set, constants are converted from nats for display.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool log2 = false);

}  // namespace adaport::theory
