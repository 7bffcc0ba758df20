#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "legalsearch/bm25.hpp"
#include "legalsearch/corpus.hpp"
#include "legalsearch/ranker.hpp"
#include "legalsearch/summarize.hpp"

namespace legalsearch {

/// Summary texts for one corpus; documents and queries live in separate id
/// spaces.
struct SummarySet {
    std::map<std::string, std::string> documents;
    std::map<std::string, std::string> queries;
};

SummarySet summarize_corpus(const Corpus& corpus, const SummaryConfig& config, std::size_t threads = 1,
                            const AbbreviationList& abbreviations = AbbreviationList::builtin());

/// Writes summaries.tsv and query_summaries.tsv into `dir`.
void save_summaries(const SummarySet& summaries, const SummaryConfig& config, const std::filesystem::path& dir);
/// Reads both caches back, checking they were built with `config`.
SummarySet load_summaries(const SummaryConfig& config, const std::filesystem::path& dir);

std::map<std::string, std::string> document_texts(const Corpus& corpus);
std::map<std::string, std::string> query_texts(const Corpus& corpus);

/// Scores every pool with BM25 and ranks it. `query_text` supplies the query
/// side in the same field convention as the index.
Run bm25_run(const Corpus& corpus, const InvertedIndex& index, const std::map<std::string, std::string>& query_text,
             const PoolScoringOptions& options, const std::string& tag);

/// BM25 over full texts, statistics from the whole document collection.
Run bm25_full_run(const Corpus& corpus, const PoolScoringOptions& options = {}, const std::string& tag = "BM25");

/// BM25 with summaries standing in for both documents and queries.
Run bm25_summary_run(const Corpus& corpus, const SummarySet& summaries, const PoolScoringOptions& options = {},
                     const std::string& tag = "BM25_SUMMARIES");

/// Uniform random scores from a seeded generator.
Run random_run(const Corpus& corpus, std::uint64_t seed, const std::string& tag = "RANDOM");

}  // namespace legalsearch
