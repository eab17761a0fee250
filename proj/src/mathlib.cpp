#include "adaport/mathlib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace adaport::math {
namespace {

void check_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

// p * log(p / q) with the 0 * log(0 / q) = 0 convention.
double xlogx_over(double p, double q)
{
    if (p == 0.0)
        return 0.0;
    if (q == 0.0)
        return std::numeric_limits<double>::infinity();
    return p * std::log(p / q);
}

}  // namespace

double kl_bernoulli(double p, double q)
{
    check_probability(p, "p");
    check_probability(q, "q");
    if (p == q)
        return 0.0;
    const double d = xlogx_over(p, q) + xlogx_over(1.0 - p, 1.0 - q);
    // Rounding can leave a tiny negative value when p and q are adjacent.
    return d < 0.0 ? 0.0 : d;
}

double kl_upper_inverse(double p, double target)
{
    check_probability(p, "p");
    if (p >= 1.0)
        throw std::domain_error("kl_upper_inverse needs p < 1");
    if (!(target >= 0.0))
        throw std::domain_error("target divergence must be nonnegative");
    if (target == 0.0)
        return p;

    double lo = p, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (kl_bernoulli(p, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    if (hi == 1.0 && kl_bernoulli(p, lo) < target)
        return 1.0;
    return 0.5 * (lo + hi);
}

double sample_beta(double a, double b, Rng& rng)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("Beta shapes must be positive");
    const double x = std::gamma_distribution<double>(a, 1.0)(rng);
    const double y = std::gamma_distribution<double>(b, 1.0)(rng);
    const double s = x + y;
    // Both gammas underflowing is only possible for tiny shapes.
    if (s == 0.0)
        return std::bernoulli_distribution(a / (a + b))(rng) ? 1.0 : 0.0;
    return x / s;
}

double beta_cdf(int a, int b, double y)
{
    if (a < 1 || b < 1)
        throw std::domain_error("beta_cdf needs integer shapes >= 1");
    check_probability(y, "y");
    return boost::math::ibeta(static_cast<double>(a), static_cast<double>(b), y);
}

double binomial_cdf(int n, double p, int k)
{
    if (n < 0)
        throw std::domain_error("binomial_cdf needs n >= 0");
    check_probability(p, "p");
    if (k < 0)
        return 0.0;
    if (k >= n)
        return 1.0;
    if (p == 0.0)
        return 1.0;
    if (p == 1.0)
        return 0.0;

    if (n <= 500) {
        // Term recurrence: C(n,j+1) p^{j+1} q^{n-j-1} = term_j * (n-j)/(j+1) * p/q.
        const double q = 1.0 - p;
        double term = std::pow(q, n);
        if (term > 0.0) {
            double sum = term;
            for (int j = 0; j < k; ++j) {
                term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * (p / q);
                sum += term;
            }
            return std::min(sum, 1.0);
        }
    }

    // Log-space terms, accumulated relative to the largest one.
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgn = std::lgamma(n + 1.0);
    std::vector<double> logs(static_cast<std::size_t>(k) + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= k; ++j) {
        logs[j] = lgn - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + j * lp + (n - j) * lq;
        peak = std::max(peak, logs[j]);
    }
    double sum = 0.0;
    for (double l : logs)
        sum += std::exp(l - peak);
    return std::min(std::exp(peak) * sum, 1.0);
}

}  // namespace adaport::math
