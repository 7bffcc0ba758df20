#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legalsearch/corpus.hpp"
#include "legalsearch/text.hpp"

namespace legalsearch {

struct PairScore {
    std::string query_id;
    std::string doc_id;
    double score = 0.0;

    bool operator==(const PairScore&) const = default;
};

struct RankedDoc {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    bool operator==(const RankedDoc&) const = default;
};

/// Ranked candidate lists per query for one system.
struct Run {
    std::string tag;
    std::map<std::string, std::vector<RankedDoc>> rankings;

    /// Ranks contiguous from 1, scores non-increasing, unique doc ids.
    void validate() const;
    std::vector<std::string> ranked_ids(const std::string& query_id) const;

    bool operator==(const Run&) const = default;
};

/// TREC run lines: `query_id Q0 doc_id rank score tag`.
std::string format_trec_run(const Run& run);
Run parse_trec_run(const std::string& contents, const std::string& source = "<run>");
Run read_trec_run(const std::filesystem::path& path);
void write_trec_run(const Run& run, const std::filesystem::path& path);

/// Sorts each pool by score descending, ties by doc_id ascending. Every pool
/// member needs exactly one score and no score may fall outside the pools.
Run rank_candidates(const std::vector<PairScore>& scores, const std::vector<QueryRecord>& pools,
                    const std::string& tag);

/// All relevant candidates, then all others, each group in doc_id order.
Run perfect_ranking(const Corpus& corpus, const std::string& tag = "PERFECT");

/// `query_id<TAB>doc_id<TAB>score` rows covering every pool pair exactly once.
std::vector<PairScore> parse_external_scores(const std::string& contents, const Corpus& corpus,
                                             const std::string& source = "<scores>");
std::vector<PairScore> load_external_scores(const std::filesystem::path& path, const Corpus& corpus);

inline constexpr std::size_t kMaxSequenceLength = 512;
/// One classification marker plus two separators.
inline constexpr std::size_t kControlMarkers = 3;

struct PairInput {
    std::vector<std::string> query_tokens;
    std::vector<std::string> candidate_tokens;
    bool truncated = false;
    std::size_t estimated_length = 0;
};

/// Keeps the query whole and drops candidate words from the tail until the
/// estimated subword length (plus control markers) fits the sequence limit.
/// Throws when the query alone does not fit.
PairInput build_pair_sequence(const TokenizedText& query, const TokenizedText& candidate);

struct PairRecord {
    std::string query_id;
    std::string doc_id;
    std::optional<bool> label;
    PairInput input;
};

/// One record per (query, pool candidate), built from summary texts keyed by
/// query id and doc id respectively.
std::vector<PairRecord> build_pair_records(const Corpus& corpus,
                                           const std::map<std::string, std::string>& query_summaries,
                                           const std::map<std::string, std::string>& doc_summaries);

/// `query_id<TAB>doc_id<TAB>label<TAB>query_text<TAB>candidate_text`, texts
/// being the space-joined (possibly truncated) tokens; label empty when
/// unlabeled.
std::string format_pairs_tsv(const std::vector<PairRecord>& records);

}  // namespace legalsearch
