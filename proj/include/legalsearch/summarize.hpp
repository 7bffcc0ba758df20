#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "legalsearch/text.hpp"

namespace legalsearch {

struct SummaryConfig {
    std::size_t word_budget = 180;
    double damping = 0.85;
    double tolerance = 1e-6;
    std::size_t max_iterations = 100;

    void validate() const;
    /// Stable 64-bit FNV-1a hash of the canonical parameter string.
    std::uint64_t hash() const;
    std::string canonical() const;
};

/// Per-document sentence statistics: each sentence acts as one "document"
/// for idf and average-length purposes.
struct SentenceStats {
    std::unordered_map<std::string, std::size_t> document_frequency;
    std::size_t sentence_count = 0;
    double average_length = 0.0;

    static SentenceStats from(std::span<const TokenizedText> sentences);
};

/// BM25 similarity of `a` against `b` (k1 = 1.2, b = 0.75), summed over every
/// token occurrence of `a`. Not symmetric on its own.
double directed_similarity(const TokenizedText& a, const TokenizedText& b, const SentenceStats& stats);

/// Symmetrized similarity: mean of both directions.
double sentence_similarity(const TokenizedText& a, const TokenizedText& b, const SentenceStats& stats);

/// Undirected weighted graph without self-loops.
class SentenceGraph {
public:
    explicit SentenceGraph(std::size_t node_count = 0);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Non-positive weights are ignored; re-adding an edge replaces its weight.
    void add_edge(std::size_t i, std::size_t j, double weight);
    double weight(std::size_t i, std::size_t j) const;
    const std::vector<std::pair<std::size_t, double>>& neighbours(std::size_t i) const { return adjacency_.at(i); }
    /// Sum of incident edge weights.
    double strength(std::size_t i) const;

private:
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
    std::size_t edge_count_ = 0;
};

SentenceGraph build_sentence_graph(std::span<const TokenizedText> sentences);

struct PageRankResult {
    std::vector<double> scores;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Weighted PageRank by power iteration from the uniform vector. Nodes with no
/// edges spread their mass uniformly. Stops once the L1 change drops below
/// config.tolerance or after config.max_iterations; scores sum to 1.
PageRankResult pagerank(const SentenceGraph& graph, const SummaryConfig& config = {});

struct Summary {
    std::string text;
    std::vector<std::size_t> selected;
    std::vector<SentenceSpan> spans;  // source spans of the selected sentences
    std::size_t word_count = 0;
    std::size_t sentence_count = 0;  // sentences in the source text

    bool operator==(const Summary&) const = default;
};

/// TextRank extractive summary: sentences ranked by PageRank over the BM25
/// similarity graph, filled greedily up to the word budget, emitted in
/// document order. Throws on text without any sentence.
Summary summarize(std::string_view text, const SummaryConfig& config = {},
                  const AbbreviationList& abbreviations = AbbreviationList::builtin());

/// Summary texts keyed by id. Concurrent get_or_compute calls are safe; the
/// first finished computation for an id wins and later ones are discarded.
class SummaryCache {
public:
    explicit SummaryCache(SummaryConfig config = {},
                          const AbbreviationList* abbreviations = &AbbreviationList::builtin());

    SummaryCache(const SummaryCache&) = delete;
    SummaryCache& operator=(const SummaryCache&) = delete;

    const SummaryConfig& config() const noexcept { return config_; }

    std::string get_or_compute(const std::string& id, std::string_view text);
    std::optional<std::string> find(const std::string& id) const;
    /// Stores a precomputed summary unless the id is already present.
    void insert(const std::string& id, std::string summary);
    std::size_t size() const;
    std::map<std::string, std::string> snapshot() const;

    /// Summarizes every (id, text) pair using up to `threads` workers.
    void compute_all(const std::vector<std::pair<std::string, std::string_view>>& items, std::size_t threads = 1);

    /// `# legalsearch-summaries v1 config=<hash> <canonical config>` header,
    /// then `id<TAB>summary` rows sorted by id.
    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    /// Throws when the file was produced with a different configuration.
    void load(const std::filesystem::path& path);

private:
    SummaryConfig config_;
    const AbbreviationList* abbreviations_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::string> entries_;
};

}  // namespace legalsearch
