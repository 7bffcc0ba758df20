#include "legalsearch/pipeline.hpp"

#include <random>

#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

constexpr const char* kDocumentSummaries = "summaries.tsv";
constexpr const char* kQuerySummaries = "query_summaries.tsv";

}  // namespace

SummarySet summarize_corpus(const Corpus& corpus, const SummaryConfig& config, std::size_t threads,
                            const AbbreviationList& abbreviations)
{
    SummaryCache documents(config, &abbreviations);
    SummaryCache queries(config, &abbreviations);
    std::vector<std::pair<std::string, std::string_view>> doc_items;
    for (const auto& [id, doc] : corpus.documents) {
        doc_items.emplace_back(id, doc.text);
    }
    std::vector<std::pair<std::string, std::string_view>> query_items;
    for (const auto& q : corpus.queries) {
        query_items.emplace_back(q.query_id, q.text);
    }
    documents.compute_all(doc_items, threads);
    queries.compute_all(query_items, threads);
    return {documents.snapshot(), queries.snapshot()};
}

void save_summaries(const SummarySet& summaries, const SummaryConfig& config, const std::filesystem::path& dir)
{
    SummaryCache documents(config);
    SummaryCache queries(config);
    for (const auto& [id, text] : summaries.documents) {
        documents.insert(id, text);
    }
    for (const auto& [id, text] : summaries.queries) {
        queries.insert(id, text);
    }
    documents.save(dir / kDocumentSummaries);
    queries.save(dir / kQuerySummaries);
}

SummarySet load_summaries(const SummaryConfig& config, const std::filesystem::path& dir)
{
    SummaryCache documents(config);
    SummaryCache queries(config);
    documents.load(dir / kDocumentSummaries);
    queries.load(dir / kQuerySummaries);
    return {documents.snapshot(), queries.snapshot()};
}

std::map<std::string, std::string> document_texts(const Corpus& corpus)
{
    std::map<std::string, std::string> texts;
    for (const auto& [id, doc] : corpus.documents) {
        texts.emplace(id, doc.text);
    }
    return texts;
}

std::map<std::string, std::string> query_texts(const Corpus& corpus)
{
    std::map<std::string, std::string> texts;
    for (const auto& q : corpus.queries) {
        texts.emplace(q.query_id, q.text);
    }
    return texts;
}

Run bm25_run(const Corpus& corpus, const InvertedIndex& index, const std::map<std::string, std::string>& query_text,
             const PoolScoringOptions& options, const std::string& tag)
{
    std::vector<PairScore> scores;
    for (const auto& q : corpus.queries) {
        auto text = query_text.find(q.query_id);
        if (text == query_text.end()) {
            throw Error("no query text for '" + q.query_id + "'");
        }
        auto pool = score_pool(index, q, tokenize_words(text->second), options);
        scores.insert(scores.end(), std::make_move_iterator(pool.begin()), std::make_move_iterator(pool.end()));
    }
    return rank_candidates(scores, corpus.queries, tag);
}

Run bm25_full_run(const Corpus& corpus, const PoolScoringOptions& options, const std::string& tag)
{
    auto index = InvertedIndex::build(document_texts(corpus), IndexField::full_text);
    return bm25_run(corpus, index, query_texts(corpus), options, tag);
}

Run bm25_summary_run(const Corpus& corpus, const SummarySet& summaries, const PoolScoringOptions& options,
                     const std::string& tag)
{
    auto index = InvertedIndex::build(summaries.documents, IndexField::summary);
    return bm25_run(corpus, index, summaries.queries, options, tag);
}

Run random_run(const Corpus& corpus, std::uint64_t seed, const std::string& tag)
{
    std::mt19937_64 rng(seed);
    std::vector<PairScore> scores;
    for (const auto& q : corpus.queries) {
        for (const auto& did : q.candidate_ids) {
            scores.push_back({q.query_id, did, static_cast<double>(rng() >> 11) * 0x1.0p-53});
        }
    }
    return rank_candidates(scores, corpus.queries, tag);
}

}  // namespace legalsearch
