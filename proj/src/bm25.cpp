#include "legalsearch/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

constexpr const char* kIndexHeader = "legalsearch-index 1";

}  // namespace

void Bm25Params::validate() const
{
    if (!(k1 >= 0.0) || !std::isfinite(k1)) {
        throw Error("k1 must be a non-negative number");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw Error("b must lie in [0, 1]");
    }
}

double bm25_idf(std::size_t df, std::size_t doc_count)
{
    const double n = static_cast<double>(doc_count);
    const double f = static_cast<double>(df);
    return std::log1p((n - f + 0.5) / (f + 0.5));
}

double bm25_tf_weight(double tf, double doc_length, double avg_length, const Bm25Params& params)
{
    if (tf <= 0.0) {
        return 0.0;
    }
    const double norm = avg_length > 0.0 ? doc_length / avg_length : 0.0;
    return tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm));
}

std::string to_string(IndexField field)
{
    return field == IndexField::full_text ? "full_text" : "summary";
}

IndexField parse_index_field(const std::string& name)
{
    if (name == "full_text") {
        return IndexField::full_text;
    }
    if (name == "summary") {
        return IndexField::summary;
    }
    throw Error("unknown index field '" + name + "' (expected full_text or summary)");
}

InvertedIndex InvertedIndex::build(const std::map<std::string, std::string>& documents, IndexField field)
{
    if (documents.empty()) {
        throw Error("cannot index an empty collection");
    }
    InvertedIndex index;
    index.field_ = field;
    for (const auto& [doc_id, text] : documents) {
        const auto doc = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(doc_id);
        auto tokens = tokenize_words(text);
        index.doc_lengths_.push_back(tokens.word_count);
        std::map<std::string, std::uint32_t> counts;
        for (auto& t : tokens.tokens) {
            ++counts[t];
        }
        for (auto& [term, tf] : counts) {
            index.postings_[term].push_back({doc, tf});
        }
    }
    index.finalize();
    return index;
}

void InvertedIndex::finalize()
{
    doc_index_.clear();
    for (std::uint32_t i = 0; i < doc_ids_.size(); ++i) {
        if (!doc_index_.emplace(doc_ids_[i], i).second) {
            throw Error("duplicate doc_id '" + doc_ids_[i] + "' in index");
        }
    }
    const double total = std::accumulate(doc_lengths_.begin(), doc_lengths_.end(), 0.0);
    avgdl_ = doc_ids_.empty() ? 0.0 : total / static_cast<double>(doc_ids_.size());
}

std::uint32_t InvertedIndex::index_of(const std::string& doc_id) const
{
    auto it = doc_index_.find(doc_id);
    if (it == doc_index_.end()) {
        throw Error("document '" + doc_id + "' is not indexed");
    }
    return it->second;
}

std::size_t InvertedIndex::doc_length(const std::string& doc_id) const
{
    return doc_lengths_[index_of(doc_id)];
}

std::size_t InvertedIndex::document_frequency(const std::string& term) const
{
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

std::size_t InvertedIndex::term_frequency(const std::string& term, const std::string& doc_id) const
{
    const auto doc = index_of(doc_id);
    auto it = postings_.find(term);
    if (it == postings_.end()) {
        return 0;
    }
    auto p = std::lower_bound(it->second.begin(), it->second.end(), doc,
                              [](const Posting& posting, std::uint32_t d) { return posting.doc < d; });
    return (p != it->second.end() && p->doc == doc) ? p->tf : 0;
}

bool InvertedIndex::operator==(const InvertedIndex& other) const
{
    return field_ == other.field_ && doc_ids_ == other.doc_ids_ && doc_lengths_ == other.doc_lengths_ &&
           postings_ == other.postings_;
}

void InvertedIndex::save(const std::filesystem::path& path) const
{
    std::string out = std::string(kIndexHeader) + "\nfield " + to_string(field_) + "\ndocs " +
                      std::to_string(doc_ids_.size()) + "\n";
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        out += doc_ids_[i] + "\t" + std::to_string(doc_lengths_[i]) + "\n";
    }
    out += "terms " + std::to_string(postings_.size()) + "\n";
    for (const auto& [term, list] : postings_) {
        out += term;
        char sep = '\t';
        for (const auto& p : list) {
            out += sep;
            out += std::to_string(p.doc) + ":" + std::to_string(p.tf);
            sep = ' ';
        }
        out += '\n';
    }
    write_file(path, out);
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path)
{
    const auto source = path.string();
    auto contents = read_file(path);
    auto lines = lines_of(contents);
    std::size_t at = 0;
    auto next_line = [&]() -> std::string_view {
        if (at >= lines.size()) {
            throw ParseError(source, at + 1, "unexpected end of index file");
        }
        return lines[at++];
    };
    auto counted = [&](std::string_view prefix) {
        auto line = next_line();
        std::size_t n = 0;
        if (line.substr(0, prefix.size()) != prefix || !parse_size(line.substr(prefix.size()), n)) {
            throw ParseError(source, at, "expected '" + std::string(prefix) + "<count>'");
        }
        return n;
    };

    if (next_line() != kIndexHeader) {
        throw ParseError(source, 1, "not a legalsearch index (bad version header)");
    }
    InvertedIndex index;
    auto field_line = next_line();
    if (field_line.substr(0, 6) != "field ") {
        throw ParseError(source, at, "expected 'field <name>'");
    }
    index.field_ = parse_index_field(std::string(field_line.substr(6)));

    const auto docs = counted("docs ");
    for (std::size_t i = 0; i < docs; ++i) {
        auto fields = split(next_line(), '\t');
        std::size_t len = 0;
        if (fields.size() != 2 || !parse_size(fields[1], len)) {
            throw ParseError(source, at, "expected 'doc_id<TAB>length'");
        }
        index.doc_ids_.emplace_back(fields[0]);
        index.doc_lengths_.push_back(len);
    }
    const auto terms = counted("terms ");
    for (std::size_t i = 0; i < terms; ++i) {
        auto line = next_line();
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(source, at, "expected 'term<TAB>postings'");
        }
        auto& list = index.postings_[std::string(line.substr(0, tab))];
        for (auto entry : split_whitespace(line.substr(tab + 1))) {
            auto colon = entry.find(':');
            std::size_t doc = 0;
            std::size_t tf = 0;
            if (colon == std::string_view::npos || !parse_size(entry.substr(0, colon), doc) ||
                !parse_size(entry.substr(colon + 1), tf) || doc >= docs || tf == 0 ||
                (!list.empty() && list.back().doc >= doc)) {
                throw ParseError(source, at, "malformed posting '" + std::string(entry) + "'");
            }
            list.push_back({static_cast<std::uint32_t>(doc), static_cast<std::uint32_t>(tf)});
        }
    }
    index.finalize();
    return index;
}

double bm25_score(const InvertedIndex& index, const TokenizedText& query_tokens, const std::string& doc_id,
                  const Bm25Params& params)
{
    const auto doc = index.index_of(doc_id);
    const auto dl = static_cast<double>(index.doc_lengths_[doc]);
    std::set<std::string_view> terms(query_tokens.tokens.begin(), query_tokens.tokens.end());
    double score = 0.0;
    for (auto term : terms) {
        auto it = index.postings_.find(term);
        if (it == index.postings_.end()) {
            continue;
        }
        const auto& list = it->second;
        auto p = std::lower_bound(list.begin(), list.end(), doc,
                                  [](const Posting& posting, std::uint32_t d) { return posting.doc < d; });
        if (p == list.end() || p->doc != doc) {
            continue;
        }
        score += bm25_idf(list.size(), index.doc_count()) *
                 bm25_tf_weight(static_cast<double>(p->tf), dl, index.avgdl_, params);
    }
    return score;
}

std::vector<PairScore> score_pool(const InvertedIndex& index, const QueryRecord& query,
                                  const TokenizedText& query_tokens, const PoolScoringOptions& options)
{
    options.params.validate();
    const TokenizedText* tokens = &query_tokens;
    TokenizedText truncated;
    if (options.max_query_tokens > 0 && query_tokens.word_count > options.max_query_tokens) {
        truncated.tokens.assign(query_tokens.tokens.begin(),
                                query_tokens.tokens.begin() + static_cast<std::ptrdiff_t>(options.max_query_tokens));
        truncated.word_count = truncated.tokens.size();
        tokens = &truncated;
    }
    std::vector<PairScore> scores;
    scores.reserve(query.candidate_ids.size());
    for (const auto& doc_id : query.candidate_ids) {
        if (!index.contains(doc_id)) {
            throw Error("candidate '" + doc_id + "' of query '" + query.query_id + "' is missing from the index");
        }
        scores.push_back({query.query_id, doc_id, bm25_score(index, *tokens, doc_id, options.params)});
    }
    return scores;
}

std::vector<PairScore> score_pool(const InvertedIndex& index, const QueryRecord& query,
                                  const PoolScoringOptions& options)
{
    return score_pool(index, query, tokenize_words(query.text), options);
}

}  // namespace legalsearch
