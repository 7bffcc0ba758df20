#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "legalsearch/corpus.hpp"
#include "legalsearch/ranker.hpp"

namespace legalsearch {

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof`
/// degrees of freedom.
double student_t_two_sided(double t, double dof);

struct ComparisonResult {
    double coefficient = 0.0;  // mean(treatment) - mean(baseline)
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    std::size_t n_baseline = 0;
    std::size_t n_treatment = 0;
};

/// OLS fit of y = b0 + b1 * treated over both groups pooled; tests b1 = 0.
/// Each group needs at least two values and the pooled variance must be
/// positive.
ComparisonResult ols_dummy_test(std::span<const double> baseline, std::span<const double> treatment);

/// Per-query metric values of both runs (run_a is the baseline) fed to
/// ols_dummy_test. The runs must cover the same queries.
ComparisonResult compare_runs(const Run& run_a, const Run& run_b, const Qrels& qrels, const std::string& metric);

/// Header plus one row: metric, n_a, n_b, coef, t, dof, p.
std::string format_comparison_tsv(const std::string& metric, const ComparisonResult& result);

}  // namespace legalsearch
