#include "legalsearch/eval.hpp"

#include <algorithm>
#include <unordered_set>

#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

void check_inputs(std::span<const std::string> ranked, const std::set<std::string>& relevant)
{
    if (relevant.empty()) {
        throw Error("metric undefined for a query without relevant documents");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ranked) {
        if (!seen.insert(id).second) {
            throw Error("document '" + id + "' appears twice in a ranking");
        }
    }
}

std::size_t hits_in_top(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k)
{
    const auto n = std::min(k, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += relevant.count(ranked[i]);
    }
    return hits;
}

std::vector<std::size_t> normalize_cutoffs(std::vector<std::size_t> ks)
{
    for (auto k : ks) {
        if (k == 0) {
            throw Error("metric cutoffs must be positive");
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

template <typename PerQuery>
void for_each_judged_query(const Run& run, const Qrels& qrels, PerQuery&& fn)
{
    for (const auto& [qid, _] : run.rankings) {
        if (!qrels.has_query(qid)) {
            throw Error("run query '" + qid + "' has no relevance judgments");
        }
    }
    for (const auto& qid : qrels.query_ids()) {
        const auto& relevant = qrels.relevant(qid);
        if (relevant.empty()) {
            throw Error("judged query '" + qid + "' has no relevant documents");
        }
        const auto ranked = run.ranked_ids(qid);
        fn(qid, std::span<const std::string>(ranked), relevant);
    }
}

}  // namespace

double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant)
{
    check_inputs(ranked, relevant);
    double sum = 0.0;
    std::size_t found = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.count(ranked[i]) != 0) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

PrecisionRecall precision_recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                                      std::size_t k)
{
    check_inputs(ranked, relevant);
    if (k == 0) {
        throw Error("cutoff k must be positive");
    }
    const auto hits = static_cast<double>(hits_in_top(ranked, relevant, k));
    return {hits / static_cast<double>(k), hits / static_cast<double>(relevant.size())};
}

double r_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant)
{
    check_inputs(ranked, relevant);
    const auto r = relevant.size();
    return static_cast<double>(hits_in_top(ranked, relevant, r)) / static_cast<double>(r);
}

InterpolatedPrecision interpolated_precision(std::span<const std::string> ranked,
                                             const std::set<std::string>& relevant)
{
    check_inputs(ranked, relevant);
    const auto r = relevant.size();
    // (hits so far, precision) at each relevant document's rank.
    std::vector<std::pair<std::size_t, double>> points;
    std::size_t found = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.count(ranked[i]) != 0) {
            ++found;
            points.emplace_back(found, static_cast<double>(found) / static_cast<double>(i + 1));
        }
    }
    InterpolatedPrecision iprec{};
    for (std::size_t level = 0; level < kRecallLevels; ++level) {
        double best = 0.0;
        for (const auto& [hits, precision] : points) {
            // recall >= level/10, compared exactly in integers
            if (hits * (kRecallLevels - 1) >= level * r) {
                best = std::max(best, precision);
            }
        }
        iprec[level] = best;
    }
    return iprec;
}

std::string canonical_metric_name(const std::string& name)
{
    if (name == "map" || name == "MAP") {
        return "map";
    }
    if (name == "Rprec" || name == "P@R") {
        return "Rprec";
    }
    auto with_cutoff = [&](const std::string& prefix, const std::string& canonical) -> std::string {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
            return {};
        }
        std::size_t k = 0;
        if (!parse_size(std::string_view(name).substr(prefix.size()), k) || k == 0) {
            return {};
        }
        return canonical + std::to_string(k);
    };
    for (const auto& [prefix, canonical] : {std::pair<std::string, std::string>{"P_", "P_"},
                                            {"P@", "P_"},
                                            {"recall_", "recall_"},
                                            {"R@", "recall_"}}) {
        auto result = with_cutoff(prefix, canonical);
        if (!result.empty()) {
            return result;
        }
    }
    throw Error("unknown metric '" + name + "' (expected map, Rprec, P_<k> or recall_<k>)");
}

std::size_t metric_cutoff(const std::string& canonical_name)
{
    auto underscore = canonical_name.find('_');
    if (underscore == std::string::npos) {
        return 0;
    }
    std::size_t k = 0;
    parse_size(std::string_view(canonical_name).substr(underscore + 1), k);
    return k;
}

double metric_value(const QueryMetrics& metrics, const std::string& canonical_name)
{
    if (canonical_name == "map") {
        return metrics.average_precision;
    }
    if (canonical_name == "Rprec") {
        return metrics.r_precision;
    }
    const auto k = metric_cutoff(canonical_name);
    const auto& table = canonical_name.rfind("P_", 0) == 0 ? metrics.precision_at : metrics.recall_at;
    auto it = table.find(k);
    if (it == table.end()) {
        throw Error("metric '" + canonical_name + "' was not computed");
    }
    return it->second;
}

std::vector<std::string> MetricsReport::metric_names() const
{
    std::vector<std::string> names{"map", "Rprec"};
    for (auto k : ks) {
        names.push_back("P_" + std::to_string(k));
    }
    for (auto k : ks) {
        names.push_back("recall_" + std::to_string(k));
    }
    return names;
}

MetricsReport evaluate_run(const Run& run, const Qrels& qrels, const std::vector<std::size_t>& ks)
{
    MetricsReport report;
    report.ks = normalize_cutoffs(ks);
    for_each_judged_query(run, qrels, [&](const std::string& qid, std::span<const std::string> ranked,
                                          const std::set<std::string>& relevant) {
        QueryMetrics m;
        m.relevant_count = relevant.size();
        m.average_precision = average_precision(ranked, relevant);
        m.r_precision = r_precision(ranked, relevant);
        for (auto k : report.ks) {
            auto pr = precision_recall_at_k(ranked, relevant, k);
            m.precision_at[k] = pr.precision;
            m.recall_at[k] = pr.recall;
        }
        report.per_query.emplace(qid, std::move(m));
    });
    report.query_count = report.per_query.size();
    for (const auto& name : report.metric_names()) {
        double sum = 0.0;
        for (const auto& [_, m] : report.per_query) {
            sum += metric_value(m, name);
        }
        report.macro[name] = report.query_count == 0 ? 0.0 : sum / static_cast<double>(report.query_count);
    }
    return report;
}

PrCurve pr_curve(const Run& run, const Qrels& qrels)
{
    PrCurve curve;
    std::size_t n = 0;
    for_each_judged_query(run, qrels, [&](const std::string&, std::span<const std::string> ranked,
                                          const std::set<std::string>& relevant) {
        auto iprec = interpolated_precision(ranked, relevant);
        for (std::size_t i = 0; i < kRecallLevels; ++i) {
            curve.precision[i] += iprec[i];
        }
        ++n;
    });
    if (n > 0) {
        for (auto& p : curve.precision) {
            p /= static_cast<double>(n);
        }
    }
    return curve;
}

std::string format_metrics_tsv(const MetricsReport& report)
{
    const auto names = report.metric_names();
    std::string out;
    for (const auto& [qid, m] : report.per_query) {
        out += "num_rel\t" + qid + "\t" + std::to_string(m.relevant_count) + "\n";
        for (const auto& name : names) {
            out += name + "\t" + qid + "\t" + format_double(metric_value(m, name)) + "\n";
        }
    }
    out += "num_q\tall\t" + std::to_string(report.query_count) + "\n";
    for (const auto& name : names) {
        out += name + "\tall\t" + format_double(report.macro.at(name)) + "\n";
    }
    return out;
}

MetricsReport parse_metrics_tsv(const std::string& contents, const std::string& source)
{
    MetricsReport report;
    std::set<std::size_t> ks;
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(source, line_no, "expected 'metric<TAB>query_id<TAB>value'");
        }
        const std::string name(fields[0]);
        const std::string qid(fields[1]);
        if (name == "num_q" || name == "num_rel") {
            std::size_t count = 0;
            if (!parse_size(fields[2], count)) {
                throw ParseError(source, line_no, "expected an integer count");
            }
            if (name == "num_q") {
                report.query_count = count;
            } else {
                report.per_query[qid].relevant_count = count;
            }
            continue;
        }
        double value = 0.0;
        if (!parse_double(fields[2], value)) {
            throw ParseError(source, line_no, "unparsable value");
        }
        std::string canonical;
        try {
            canonical = canonical_metric_name(name);
        } catch (const Error& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (qid == "all") {
            report.macro[canonical] = value;
            continue;
        }
        auto& m = report.per_query[qid];
        const auto k = metric_cutoff(canonical);
        if (canonical == "map") {
            m.average_precision = value;
        } else if (canonical == "Rprec") {
            m.r_precision = value;
        } else if (canonical.rfind("P_", 0) == 0) {
            m.precision_at[k] = value;
            ks.insert(k);
        } else {
            m.recall_at[k] = value;
            ks.insert(k);
        }
    }
    report.ks.assign(ks.begin(), ks.end());
    return report;
}

std::string format_pr_curve_tsv(const PrCurve& curve)
{
    std::string out = "recall\tprecision\n";
    for (std::size_t i = 0; i < kRecallLevels; ++i) {
        out += format_double(static_cast<double>(i) / 10.0) + "\t" + format_double(curve.precision[i]) + "\n";
    }
    return out;
}

}  // namespace legalsearch
