#pragma once

#include "adaport/core.hpp"

namespace adaport::math {

// KL divergence between Bernoulli(p) and Bernoulli(q), in nats.
// Uses 0*log(0/x) = 0; returns +inf when q is 0 or 1 and p != q.
// Throws std::domain_error for arguments outside [0,1].
double kl_bernoulli(double p, double q);

// Largest-side inverse of kl_bernoulli: the q in [p,1] with
// kl_bernoulli(p, q) == target, found by bisection to 1e-12 in q.
// Saturates at 1 when target is beyond reach.
double kl_upper_inverse(double p, double target);

// One draw from Beta(a, b), a and b > 0.
double sample_beta(double a, double b, Rng& rng);

// Regularized incomplete beta I_y(a, b) for integer shapes >= 1.
double beta_cdf(int a, int b, double y);

// P[Binomial(n, p) <= k].
double binomial_cdf(int n, double p, int k);

}  // namespace adaport::math
