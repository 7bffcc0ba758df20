#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "legalsearch/eval.hpp"
#include "legalsearch/stats.hpp"
#include "legalsearch/tsv.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace legalsearch;

namespace {

/// Textbook OLS through the 2x2 normal equations on the explicit design
/// matrix [1, treated], residual variance from the fitted values.
struct Fit {
    double slope;
    double t;
};

Fit matrix_ols(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> x;
    std::vector<double> y;
    for (double v : a) {
        x.push_back(0.0);
        y.push_back(v);
    }
    for (double v : b) {
        x.push_back(1.0);
        y.push_back(v);
    }
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += 1;
        sx += x[i];
        sxx += x[i] * x[i];
        sy += y[i];
        sxy += x[i] * y[i];
    }
    const double det = s1 * sxx - sx * sx;
    const double b0 = (sxx * sy - sx * sxy) / det;
    const double b1 = (s1 * sxy - sx * sy) / det;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - b0 - b1 * x[i];
        rss += r * r;
    }
    const double sigma2 = rss / (s1 - 2);
    const double var_b1 = sigma2 * s1 / det;
    return {b1, b1 / std::sqrt(var_b1)};
}

std::vector<double> draw(std::mt19937_64& rng, std::size_t n, double mean, double sd)
{
    std::normal_distribution<double> dist(mean, sd);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

}  // namespace

TEST_CASE("incomplete beta")
{
    CHECK(incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(incomplete_beta(2.0, 3.0, 1.5), Error);
    CHECK_THROWS_AS(incomplete_beta(0.0, 3.0, 0.5), Error);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> shape(0.1, 60.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = shape(rng);
        const double b = shape(rng);
        const double x = unit(rng);
        CHECK(std::abs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-12);
    }
}

TEST_CASE("two-sided t tail")
{
    CHECK(student_t_two_sided(0.0, 5.0) == 1.0);
    CHECK(student_t_two_sided(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(student_t_two_sided(std::sqrt(2.0), 2.0) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-14));
    CHECK(student_t_two_sided(-3.0, 7.0) == student_t_two_sided(3.0, 7.0));
    CHECK(student_t_two_sided(1e6, 30.0) < 1e-50);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> tdist(-12.0, 12.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = tdist(rng);
        const double dof = static_cast<double>(synthetic::uniform(rng, 1, 400));
        boost::math::students_t reference(dof);
        const double expected = 2.0 * boost::math::cdf(reference, -std::abs(t));
        CHECK(std::abs(student_t_two_sided(t, dof) - expected) < 1e-12);
    }
}

TEST_CASE("dummy regression matches the pooled t-test and explicit OLS")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = draw(rng, synthetic::uniform(rng, 2, 60), 0.4, 0.2);
        const auto b = draw(rng, synthetic::uniform(rng, 2, 60), 0.4 + 0.1 * (trial % 3), 0.2);
        const auto r = ols_dummy_test(a, b);
        const auto pooled = oracle::pooled_t_test(a, b);
        const auto fit = matrix_ols(a, b);
        CHECK(r.dof == a.size() + b.size() - 2);
        CHECK(r.n_baseline == a.size());
        CHECK(r.n_treatment == b.size());
        CHECK(std::abs(r.coefficient - fit.slope) < 1e-12);
        CHECK(std::abs(r.t_statistic - pooled.t) < 1e-9 * std::max(1.0, std::abs(pooled.t)));
        CHECK(std::abs(r.t_statistic - fit.t) < 1e-9 * std::max(1.0, std::abs(fit.t)));
        CHECK(std::abs(r.p_value - pooled.p) < 1e-9);
    }
}

TEST_CASE("dummy regression edge cases")
{
    const std::vector<double> v{0.2, 0.5, 0.9, 0.1};
    auto same = ols_dummy_test(v, v);
    CHECK(same.coefficient == 0.0);
    CHECK(same.t_statistic == 0.0);
    CHECK(same.p_value == 1.0);

    auto swapped = ols_dummy_test(std::vector<double>{0.1, 0.3, 0.2}, std::vector<double>{0.6, 0.9, 0.7, 0.8});
    auto reverse = ols_dummy_test(std::vector<double>{0.6, 0.9, 0.7, 0.8}, std::vector<double>{0.1, 0.3, 0.2});
    CHECK(swapped.t_statistic == doctest::Approx(-reverse.t_statistic));
    CHECK(swapped.p_value == doctest::Approx(reverse.p_value));
    CHECK(swapped.coefficient > 0.0);

    // One constant group is fine as long as the other varies.
    CHECK_NOTHROW(ols_dummy_test(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.5}));
    CHECK_THROWS_AS(ols_dummy_test(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0}), Error);
    CHECK_THROWS_AS(ols_dummy_test(std::vector<double>{1.0}, std::vector<double>{0.0, 0.5}), Error);
    CHECK_THROWS_AS(ols_dummy_test(std::vector<double>{1.0, NAN}, std::vector<double>{0.0, 0.5}), Error);
}

TEST_CASE("compare_runs")
{
    auto c = synthetic::labeled_corpus(40, 30, 10);
    auto perfect = perfect_ranking(c);
    std::vector<PairScore> scores;
    std::mt19937_64 rng(1);
    for (const auto& q : c.queries) {
        for (const auto& d : q.candidate_ids) {
            scores.push_back({q.query_id, d, std::generate_canonical<double, 53>(rng)});
        }
    }
    auto random = rank_candidates(scores, c.queries, "R");
    auto result = compare_runs(random, perfect, *c.qrels, "MAP");
    CHECK(result.n_baseline == 30);
    CHECK(result.coefficient > 0.0);
    CHECK(result.p_value < 0.01);

    auto r_metrics = evaluate_run(random, *c.qrels, {5});
    std::vector<double> base;
    std::vector<double> ones(30, 1.0);
    for (const auto& [_, m] : r_metrics.per_query) {
        base.push_back(m.average_precision);
    }
    const auto direct = ols_dummy_test(base, ones);
    CHECK(result.t_statistic == direct.t_statistic);

    CHECK_NOTHROW(compare_runs(random, perfect, *c.qrels, "P@5"));
    CHECK_THROWS_AS(compare_runs(random, perfect, *c.qrels, "ndcg"), Error);

    Run fewer = perfect;
    fewer.rankings.erase(fewer.rankings.begin());
    CHECK_THROWS_AS(compare_runs(random, fewer, *c.qrels, "map"), Error);
}

TEST_CASE("comparison file")
{
    ComparisonResult r;
    r.coefficient = 0.25;
    r.t_statistic = 2.5;
    r.p_value = 0.015;
    r.dof = 58;
    r.n_baseline = 30;
    r.n_treatment = 30;
    CHECK(format_comparison_tsv("map", r) == "metric\tn_a\tn_b\tcoef\tt\tdof\tp\nmap\t30\t30\t0.25\t2.5\t58\t0.015\n");
}
