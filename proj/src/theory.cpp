#include "adaport/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "adaport/mathlib.hpp"

namespace adaport::theory {
namespace {

constexpr int kGridPoints = 2000;
constexpr double kGoldenRelTol = 1e-8;

template <class TermFn>
double sum_terms(const BernoulliInstance& instance, std::vector<double>* per_arm, TermFn term)
{
    const Arm star = instance.optimal_arm();
    const double threshold = instance.product(star);
    double total = 0.0;
    if (per_arm)
        per_arm->assign(instance.arms(), 0.0);
    for (Arm i = 0; i < instance.arms(); ++i) {
        if (i == star)
            continue;
        const double gap = threshold - instance.product(i);
        const double v = term(instance.alpha()[i], instance.beta()[i], threshold, gap);
        if (per_arm)
            (*per_arm)[i] = v;
        total += v;
    }
    return total;
}

double term_2fb(double alpha, double beta, double threshold, double gap)
{
    if (alpha <= threshold)
        return 0.0;
    return gap / math::kl_bernoulli(beta, threshold / alpha);
}

double term_2bb(double alpha, double beta, double threshold, double gap)
{
    return gap / two_level_divergence(alpha, beta, threshold);
}

double term_1b(double alpha, double beta, double threshold, double gap)
{
    return gap / product_divergence(alpha, beta, threshold);
}

}  // namespace

double two_level_divergence(double alpha, double beta, double threshold)
{
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::domain_error("threshold must lie in (0,1]");
    if (alpha * beta >= threshold)
        return 0.0;

    auto objective = [&](double x) {
        return math::kl_bernoulli(alpha, x) + math::kl_bernoulli(beta, std::min(1.0, threshold / x));
    };

    const double lo = threshold, hi = 1.0;
    const double step = (hi - lo) / (kGridPoints - 1);
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGridPoints; ++k) {
        const double v = objective(lo + k * step);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }

    // Golden-section search on the two cells adjacent to the best grid point.
    double a = lo + std::max(best - 1, 0) * step;
    double b = lo + std::min(best + 1, kGridPoints - 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > kGoldenRelTol * std::max(std::abs(a), std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    return std::min({best_value, fc, fd, objective(0.5 * (a + b))});
}

double product_divergence(double alpha, double beta, double threshold)
{
    const double mean = alpha * beta;
    if (mean >= threshold)
        return 0.0;
    // d(mean, q) increases in q above mean, so the smallest feasible
    // product is the minimizer.
    return math::kl_bernoulli(mean, threshold);
}

double constant_2fb(const BernoulliInstance& instance)
{
    return sum_terms(instance, nullptr, term_2fb);
}

double constant_2bb(const BernoulliInstance& instance)
{
    return sum_terms(instance, nullptr, term_2bb);
}

double constant_1b(const BernoulliInstance& instance)
{
    return sum_terms(instance, nullptr, term_1b);
}

BoundReport bound_report(const BernoulliInstance& instance)
{
    BoundReport r;
    r.c_2fb = sum_terms(instance, &r.per_arm.two_fb, term_2fb);
    r.c_2bb = sum_terms(instance, &r.per_arm.two_bb, term_2bb);
    r.c_1b = sum_terms(instance, &r.per_arm.one_b, term_1b);
    return r;
}

std::vector<SweepRow> sweep_two_arm(RatePair optimal, const std::vector<RatePair>& varying)
{
    std::vector<SweepRow> rows;
    rows.reserve(varying.size());
    for (const RatePair& sub : varying) {
        SweepRow row;
        row.sub = sub;
        try {
            const BernoulliInstance inst({optimal.alpha, sub.alpha}, {optimal.beta, sub.beta});
            if (inst.optimal_arm() != 0)
                row.status = "suboptimal_fixed_arm";
            else
                row.report = bound_report(inst);
        } catch (const AmbiguousOptimum&) {
            row.status = "ambiguous_optimum";
        } catch (const std::exception&) {
            row.status = "invalid_instance";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RatePair> figure_grid(char panel)
{
    switch (panel) {
    case 'a': return {{0.75, 0.8}, {0.8, 0.8}, {0.85, 0.8}, {0.9, 0.8}};
    case 'b': return {{0.75, 0.6}, {0.75, 0.7}, {0.75, 0.8}, {0.75, 0.9}};
    default: throw std::invalid_argument("figure panel must be 'a' or 'b'");
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool log2)
{
    const double scale = log2 ? std::log(2.0) : 1.0;  // c in log2 units = c_nats * ln 2
    out << "alpha_sub,beta_sub,c_2fb,c_2bb,c_1b,status\n";
    out << std::setprecision(12);
    for (const SweepRow& r : rows) {
        out << r.sub.alpha << ',' << r.sub.beta << ',';
        if (r.ok())
            out << r.report.c_2fb * scale << ',' << r.report.c_2bb * scale << ',' << r.report.c_1b * scale;
        else
            out << ",,";
        out << ',' << r.status << '\n';
    }
}

}  // namespace adaport::theory
