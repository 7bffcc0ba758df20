#include "legalsearch/summarize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <thread>

#include "legalsearch/bm25.hpp"
#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

constexpr const char* kCacheMagic = "# legalsearch-summaries v1";

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace

void SummaryConfig::validate() const
{
    if (word_budget == 0) {
        throw Error("summary word budget must be positive");
    }
    if (!(damping > 0.0 && damping < 1.0)) {
        throw Error("damping must lie strictly between 0 and 1");
    }
    if (!(tolerance > 0.0)) {
        throw Error("tolerance must be positive");
    }
    if (max_iterations == 0) {
        throw Error("max_iterations must be positive");
    }
}

std::string SummaryConfig::canonical() const
{
    return "word_budget=" + std::to_string(word_budget) + " damping=" + format_double(damping) +
           " tolerance=" + format_double(tolerance) + " max_iterations=" + std::to_string(max_iterations);
}

std::uint64_t SummaryConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Similarity ------------------------------------------------------------------

SentenceStats SentenceStats::from(std::span<const TokenizedText> sentences)
{
    SentenceStats stats;
    stats.sentence_count = sentences.size();
    std::size_t total = 0;
    for (const auto& s : sentences) {
        total += s.word_count;
        std::vector<std::string> distinct = s.tokens;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (auto& t : distinct) {
            ++stats.document_frequency[t];
        }
    }
    if (!sentences.empty()) {
        stats.average_length = static_cast<double>(total) / static_cast<double>(sentences.size());
    }
    return stats;
}

double directed_similarity(const TokenizedText& a, const TokenizedText& b, const SentenceStats& stats)
{
    static const Bm25Params params{1.2, 0.75};
    std::unordered_map<std::string_view, std::size_t> tf_b;
    for (const auto& t : b.tokens) {
        ++tf_b[t];
    }
    double score = 0.0;
    for (const auto& t : a.tokens) {
        auto it = tf_b.find(t);
        if (it == tf_b.end()) {
            continue;
        }
        auto df = stats.document_frequency.find(t);
        std::size_t n_t = df == stats.document_frequency.end() ? 0 : df->second;
        score += bm25_idf(n_t, stats.sentence_count) *
                 bm25_tf_weight(static_cast<double>(it->second), static_cast<double>(b.word_count),
                                stats.average_length, params);
    }
    return score;
}

double sentence_similarity(const TokenizedText& a, const TokenizedText& b, const SentenceStats& stats)
{
    return (directed_similarity(a, b, stats) + directed_similarity(b, a, stats)) / 2.0;
}

// Graph -------------------------------------------------------------------------

SentenceGraph::SentenceGraph(std::size_t node_count) : adjacency_(node_count) {}

void SentenceGraph::add_edge(std::size_t i, std::size_t j, double weight)
{
    if (i >= adjacency_.size() || j >= adjacency_.size()) {
        throw Error("edge endpoint out of range");
    }
    if (i == j || !(weight > 0.0)) {
        return;
    }
    auto upsert = [&](std::size_t from, std::size_t to) {
        auto& adj = adjacency_[from];
        auto it = std::find_if(adj.begin(), adj.end(), [&](const auto& e) { return e.first == to; });
        if (it != adj.end()) {
            it->second = weight;
            return false;
        }
        adj.emplace_back(to, weight);
        return true;
    };
    upsert(j, i);
    if (upsert(i, j)) {
        ++edge_count_;
    }
}

double SentenceGraph::weight(std::size_t i, std::size_t j) const
{
    for (const auto& [to, w] : adjacency_.at(i)) {
        if (to == j) {
            return w;
        }
    }
    return 0.0;
}

double SentenceGraph::strength(std::size_t i) const
{
    double total = 0.0;
    for (const auto& [_, w] : adjacency_.at(i)) {
        total += w;
    }
    return total;
}

SentenceGraph build_sentence_graph(std::span<const TokenizedText> sentences)
{
    SentenceGraph graph(sentences.size());
    auto stats = SentenceStats::from(sentences);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (std::size_t j = i + 1; j < sentences.size(); ++j) {
            double w = sentence_similarity(sentences[i], sentences[j], stats);
            if (w > 0.0) {
                graph.add_edge(i, j, w);
            }
        }
    }
    return graph;
}

PageRankResult pagerank(const SentenceGraph& graph, const SummaryConfig& config)
{
    config.validate();
    const std::size_t n = graph.node_count();
    if (n == 0) {
        throw Error("pagerank needs a non-empty graph");
    }
    const double d = config.damping;
    const double uniform = 1.0 / static_cast<double>(n);

    std::vector<double> strength(n);
    for (std::size_t i = 0; i < n; ++i) {
        strength[i] = graph.strength(i);
    }

    PageRankResult result;
    result.scores.assign(n, uniform);
    std::vector<double> next(n);
    while (result.iterations < config.max_iterations) {
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (strength[j] == 0.0) {
                dangling += result.scores[j];
            }
        }
        const double base = (1.0 - d) * uniform + d * dangling * uniform;
        std::fill(next.begin(), next.end(), base);
        for (std::size_t j = 0; j < n; ++j) {
            if (strength[j] == 0.0) {
                continue;
            }
            const double share = d * result.scores[j] / strength[j];
            for (const auto& [i, w] : graph.neighbours(j)) {
                next[i] += share * w;
            }
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            delta += std::abs(next[i] - result.scores[i]);
        }
        result.scores.swap(next);
        ++result.iterations;
        if (delta < config.tolerance) {
            result.converged = true;
            break;
        }
    }
    // The update preserves total mass; renormalize away rounding drift.
    const double total = std::accumulate(result.scores.begin(), result.scores.end(), 0.0);
    for (auto& s : result.scores) {
        s /= total;
    }
    return result;
}

// Summaries ---------------------------------------------------------------------

Summary summarize(std::string_view text, const SummaryConfig& config, const AbbreviationList& abbreviations)
{
    config.validate();
    auto spans = split_sentences(text, abbreviations);
    if (spans.empty()) {
        throw Error("cannot summarize empty text");
    }
    std::vector<TokenizedText> sentences;
    sentences.reserve(spans.size());
    std::size_t total_words = 0;
    for (const auto& span : spans) {
        sentences.push_back(tokenize_words(span.text));
        total_words += sentences.back().word_count;
    }

    std::vector<std::size_t> selected;
    if (total_words <= config.word_budget) {
        selected.resize(spans.size());
        std::iota(selected.begin(), selected.end(), 0);
    } else {
        auto ranks = pagerank(build_sentence_graph(sentences), config);
        std::vector<std::size_t> order(spans.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return ranks.scores[a] > ranks.scores[b]; });
        std::size_t used = 0;
        for (auto idx : order) {
            const auto words = sentences[idx].word_count;
            if (selected.empty() || used + words <= config.word_budget) {
                selected.push_back(idx);
                used += words;
            }
        }
        std::sort(selected.begin(), selected.end());
    }

    Summary summary;
    summary.sentence_count = spans.size();
    for (auto idx : selected) {
        if (!summary.text.empty()) {
            summary.text += ' ';
        }
        summary.text += spans[idx].text;
        summary.word_count += sentences[idx].word_count;
        summary.spans.push_back(spans[idx]);
    }
    summary.selected = std::move(selected);
    return summary;
}

// Cache -------------------------------------------------------------------------

SummaryCache::SummaryCache(SummaryConfig config, const AbbreviationList* abbreviations)
    : config_(config), abbreviations_(abbreviations)
{
    config_.validate();
}

std::string SummaryCache::get_or_compute(const std::string& id, std::string_view text)
{
    {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(id);
        if (it != entries_.end()) {
            return it->second;
        }
    }
    auto computed = summarize(text, config_, *abbreviations_).text;
    std::unique_lock lock(mutex_);
    return entries_.try_emplace(id, std::move(computed)).first->second;
}

std::optional<std::string> SummaryCache::find(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void SummaryCache::insert(const std::string& id, std::string summary)
{
    std::unique_lock lock(mutex_);
    entries_.try_emplace(id, std::move(summary));
}

std::size_t SummaryCache::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::map<std::string, std::string> SummaryCache::snapshot() const
{
    std::shared_lock lock(mutex_);
    return entries_;
}

void SummaryCache::compute_all(const std::vector<std::pair<std::string, std::string_view>>& items,
                               std::size_t threads)
{
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, items.size()));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (auto i = next++; i < items.size(); i = next++) {
            try {
                get_or_compute(items[i].first, items[i].second);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::string SummaryCache::serialize() const
{
    std::string out = std::string(kCacheMagic) + " config=" + hex64(config_.hash()) + " " + config_.canonical() + "\n";
    for (const auto& [id, text] : snapshot()) {
        out += id + "\t" + escape_field(text) + "\n";
    }
    return out;
}

void SummaryCache::save(const std::filesystem::path& path) const
{
    write_file(path, serialize());
}

void SummaryCache::load(const std::filesystem::path& path)
{
    auto contents = read_file(path);
    auto lines = lines_of(contents);
    const std::string expected = std::string(kCacheMagic) + " config=" + hex64(config_.hash());
    if (lines.empty() || lines[0].substr(0, expected.size()) != expected) {
        throw ParseError(path.string(), 1, "summary cache header does not match configuration " + config_.canonical());
    }
    std::map<std::string, std::string> loaded;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        auto tab = lines[i].find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(path.string(), i + 1, "malformed line (no TAB)");
        }
        loaded.emplace(std::string(lines[i].substr(0, tab)), unescape_field(lines[i].substr(tab + 1)));
    }
    std::unique_lock lock(mutex_);
    for (auto& [id, text] : loaded) {
        entries_.insert_or_assign(id, std::move(text));
    }
}

}  // namespace legalsearch
