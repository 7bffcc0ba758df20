#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "legalsearch/corpus.hpp"
#include "legalsearch/ranker.hpp"
#include "legalsearch/text.hpp"

namespace legalsearch {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    void validate() const;
};

/// Non-negative idf: ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::size_t df, std::size_t doc_count);

/// Saturated term-frequency component tf*(k1+1) / (tf + k1*(1 - b + b*dl/avgdl)).
/// A zero average length disables length normalization.
double bm25_tf_weight(double tf, double doc_length, double avg_length, const Bm25Params& params);

enum class IndexField { full_text, summary };

std::string to_string(IndexField field);
IndexField parse_index_field(const std::string& name);

struct Posting {
    std::uint32_t doc;  // position in InvertedIndex::doc_ids()
    std::uint32_t tf;

    bool operator==(const Posting&) const = default;
};

/// Term -> postings over one text field of a document collection.
/// Immutable after construction; safe for concurrent scoring.
class InvertedIndex {
public:
    /// Tokenizes every text with tokenize_words. Throws on an empty collection.
    static InvertedIndex build(const std::map<std::string, std::string>& documents, IndexField field);

    /// Line-based format with a version header; see save().
    static InvertedIndex load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    IndexField field() const noexcept { return field_; }
    std::size_t doc_count() const noexcept { return doc_ids_.size(); }
    double avgdl() const noexcept { return avgdl_; }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::vector<std::size_t>& doc_lengths() const noexcept { return doc_lengths_; }
    const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const noexcept { return postings_; }

    bool contains(const std::string& doc_id) const { return doc_index_.count(doc_id) != 0; }
    std::size_t doc_length(const std::string& doc_id) const;
    std::size_t document_frequency(const std::string& term) const;
    std::size_t term_frequency(const std::string& term, const std::string& doc_id) const;

    bool operator==(const InvertedIndex& other) const;

private:
    std::uint32_t index_of(const std::string& doc_id) const;
    void finalize();

    IndexField field_ = IndexField::full_text;
    std::vector<std::string> doc_ids_;
    std::vector<std::size_t> doc_lengths_;
    std::unordered_map<std::string, std::uint32_t> doc_index_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    double avgdl_ = 0.0;

    friend double bm25_score(const InvertedIndex&, const TokenizedText&, const std::string&, const Bm25Params&);
};

/// Sum over distinct query terms of idf * tf weight. Terms missing from the
/// index contribute nothing. Throws on an unknown doc_id.
double bm25_score(const InvertedIndex& index, const TokenizedText& query_tokens, const std::string& doc_id,
                  const Bm25Params& params = {});

struct PoolScoringOptions {
    Bm25Params params;
    /// Keep only the first N query tokens; 0 disables truncation.
    std::size_t max_query_tokens = 0;
};

/// One score per pool candidate, in pool order.
std::vector<PairScore> score_pool(const InvertedIndex& index, const QueryRecord& query,
                                  const TokenizedText& query_tokens, const PoolScoringOptions& options = {});

/// Convenience overload tokenizing query.text.
std::vector<PairScore> score_pool(const InvertedIndex& index, const QueryRecord& query,
                                  const PoolScoringOptions& options = {});

}  // namespace legalsearch
