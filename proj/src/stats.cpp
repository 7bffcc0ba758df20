#include "legalsearch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "legalsearch/eval.hpp"
#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIterations = 10000;
    constexpr double kEpsilon = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) {
            return h;
        }
    }
    throw Error("incomplete beta continued fraction did not converge");
}

// I_x(a, b) with y = 1 - x supplied separately so callers can avoid
// cancellation when x is close to 1.
double incomplete_beta(double a, double b, double x, double y)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (y <= 0.0) {
        return 1.0;
    }
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

// Summation in sorted order makes the mean a function of the multiset alone.
double sorted_mean(std::span<const double> values)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

bool constant(std::span<const double> values)
{
    return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

}  // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error("incomplete beta needs positive shape parameters");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error("incomplete beta argument outside [0, 1]");
    }
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_two_sided(double t, double dof)
{
    if (!(dof > 0.0)) {
        throw Error("t distribution needs positive degrees of freedom");
    }
    if (std::isnan(t)) {
        throw Error("t statistic is NaN");
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    const double t2 = t * t;
    const double x = dof / (dof + t2);
    const double y = t2 / (dof + t2);
    return std::clamp(incomplete_beta(dof / 2.0, 0.5, x, y), 0.0, 1.0);
}

ComparisonResult ols_dummy_test(std::span<const double> baseline, std::span<const double> treatment)
{
    if (baseline.size() < 2 || treatment.size() < 2) {
        throw Error("each group needs at least two values");
    }
    for (auto group : {baseline, treatment}) {
        for (double v : group) {
            if (!std::isfinite(v)) {
                throw Error("group values must be finite");
            }
        }
    }
    if (constant(baseline) && constant(treatment)) {
        throw Error("degenerate comparison: zero pooled variance");
    }

    const auto n0 = static_cast<double>(baseline.size());
    const auto n1 = static_cast<double>(treatment.size());
    const double n = n0 + n1;

    // With a single binary regressor the normal equations solve to the group
    // means: intercept = mean(baseline), slope = mean(treatment) - intercept,
    // and the centered regressor sum of squares is n0 * n1 / n.
    const double intercept = sorted_mean(baseline);
    const double slope = sorted_mean(treatment) - intercept;
    const double sxx = n0 * n1 / n;

    double rss = 0.0;
    for (double y : baseline) {
        const double r = y - intercept;
        rss += r * r;
    }
    for (double y : treatment) {
        const double r = y - intercept - slope;
        rss += r * r;
    }
    const double dof = n - 2.0;
    const double standard_error = std::sqrt(rss / dof / sxx);

    ComparisonResult result;
    result.coefficient = slope;
    result.t_statistic = slope / standard_error;
    result.dof = baseline.size() + treatment.size() - 2;
    result.n_baseline = baseline.size();
    result.n_treatment = treatment.size();
    result.p_value = student_t_two_sided(result.t_statistic, dof);
    return result;
}

ComparisonResult compare_runs(const Run& run_a, const Run& run_b, const Qrels& qrels, const std::string& metric)
{
    std::vector<std::string> ids_a;
    std::vector<std::string> ids_b;
    for (const auto& [qid, _] : run_a.rankings) {
        ids_a.push_back(qid);
    }
    for (const auto& [qid, _] : run_b.rankings) {
        ids_b.push_back(qid);
    }
    if (ids_a != ids_b) {
        throw Error("runs '" + run_a.tag + "' and '" + run_b.tag + "' cover different query sets");
    }
    const auto name = canonical_metric_name(metric);
    std::vector<std::size_t> ks;
    if (auto k = metric_cutoff(name); k > 0) {
        ks.push_back(k);
    }
    const auto report_a = evaluate_run(run_a, qrels, ks);
    const auto report_b = evaluate_run(run_b, qrels, ks);
    std::vector<double> baseline;
    std::vector<double> treatment;
    for (const auto& [qid, m] : report_a.per_query) {
        baseline.push_back(metric_value(m, name));
        treatment.push_back(metric_value(report_b.per_query.at(qid), name));
    }
    return ols_dummy_test(baseline, treatment);
}

std::string format_comparison_tsv(const std::string& metric, const ComparisonResult& result)
{
    return "metric\tn_a\tn_b\tcoef\tt\tdof\tp\n" + metric + "\t" + std::to_string(result.n_baseline) + "\t" +
           std::to_string(result.n_treatment) + "\t" + format_double(result.coefficient) + "\t" +
           format_double(result.t_statistic) + "\t" + std::to_string(result.dof) + "\t" +
           format_double(result.p_value) + "\n";
}

}  // namespace legalsearch
