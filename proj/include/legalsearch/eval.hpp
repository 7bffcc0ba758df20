#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "legalsearch/corpus.hpp"
#include "legalsearch/ranker.hpp"

namespace legalsearch {

// Per-query measures. `ranked` must not contain duplicates and `relevant`
// must be non-empty; both conditions throw Error.

double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

/// The precision denominator stays k even when fewer than k docs are ranked.
PrecisionRecall precision_recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                                      std::size_t k);

double r_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant);

inline constexpr std::size_t kRecallLevels = 11;
using InterpolatedPrecision = std::array<double, kRecallLevels>;

/// Interpolated precision at recall 0.0, 0.1, ..., 1.0.
InterpolatedPrecision interpolated_precision(std::span<const std::string> ranked,
                                             const std::set<std::string>& relevant);

struct QueryMetrics {
    double average_precision = 0.0;
    double r_precision = 0.0;
    std::size_t relevant_count = 0;
    std::map<std::size_t, double> precision_at;
    std::map<std::size_t, double> recall_at;

    bool operator==(const QueryMetrics&) const = default;
};

/// Metric names follow trec_eval: map, Rprec, P_<k>, recall_<k>. The aliases
/// MAP, P@R, P@<k> and R@<k> are accepted on input.
std::string canonical_metric_name(const std::string& name);
/// Cutoff needed by a metric name, or 0 for map/Rprec.
std::size_t metric_cutoff(const std::string& canonical_name);
double metric_value(const QueryMetrics& metrics, const std::string& canonical_name);

struct MetricsReport {
    std::vector<std::size_t> ks;
    std::map<std::string, QueryMetrics> per_query;
    std::map<std::string, double> macro;  // canonical metric name -> mean over queries
    std::size_t query_count = 0;

    std::vector<std::string> metric_names() const;
    bool operator==(const MetricsReport&) const = default;
};

/// Macro-averaged metrics over every judged query. Judged queries missing
/// from the run score zero; run queries without judgments throw.
MetricsReport evaluate_run(const Run& run, const Qrels& qrels, const std::vector<std::size_t>& ks);

struct PrCurve {
    InterpolatedPrecision precision{};
};

/// Macro average of per-query interpolated precision, same query set as
/// evaluate_run.
PrCurve pr_curve(const Run& run, const Qrels& qrels);

/// `metric<TAB>query_id|all<TAB>value` rows, per-query rows first.
std::string format_metrics_tsv(const MetricsReport& report);
MetricsReport parse_metrics_tsv(const std::string& contents, const std::string& source = "<metrics>");

std::string format_pr_curve_tsv(const PrCurve& curve);

}  // namespace legalsearch
