#include "legalsearch/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "legalsearch/tsv.hpp"

namespace legalsearch {

void Run::validate() const
{
    for (const auto& [qid, ranking] : rankings) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            const auto& r = ranking[i];
            if (r.rank != i + 1) {
                throw Error("run '" + tag + "': ranks of query '" + qid + "' are not contiguous from 1");
            }
            if (i > 0 && r.score > ranking[i - 1].score) {
                throw Error("run '" + tag + "': scores of query '" + qid + "' increase with rank");
            }
            if (!seen.insert(r.doc_id).second) {
                throw Error("run '" + tag + "': document '" + r.doc_id + "' ranked twice for query '" + qid + "'");
            }
        }
    }
}

std::vector<std::string> Run::ranked_ids(const std::string& query_id) const
{
    std::vector<std::string> ids;
    auto it = rankings.find(query_id);
    if (it != rankings.end()) {
        ids.reserve(it->second.size());
        for (const auto& r : it->second) {
            ids.push_back(r.doc_id);
        }
    }
    return ids;
}

std::string format_trec_run(const Run& run)
{
    std::string out;
    for (const auto& [qid, ranking] : run.rankings) {
        for (const auto& r : ranking) {
            out += qid + " Q0 " + r.doc_id + " " + std::to_string(r.rank) + " " + format_double(r.score) + " " +
                   run.tag + "\n";
        }
    }
    return out;
}

Run parse_trec_run(const std::string& contents, const std::string& source)
{
    Run run;
    bool have_tag = false;
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        auto fields = split_whitespace(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 6) {
            throw ParseError(source, line_no, "expected 'query_id Q0 doc_id rank score tag'");
        }
        std::size_t rank = 0;
        double score = 0.0;
        if (!parse_size(fields[3], rank) || rank == 0) {
            throw ParseError(source, line_no, "rank must be a positive integer");
        }
        if (!parse_double(fields[4], score) || !std::isfinite(score)) {
            throw ParseError(source, line_no, "score must be a finite number");
        }
        if (!have_tag) {
            run.tag = std::string(fields[5]);
            have_tag = true;
        } else if (fields[5] != run.tag) {
            throw ParseError(source, line_no, "mixed run tags '" + run.tag + "' and '" + std::string(fields[5]) + "'");
        }
        run.rankings[std::string(fields[0])].push_back({std::string(fields[2]), score, rank});
    }
    for (auto& [_, ranking] : run.rankings) {
        std::stable_sort(ranking.begin(), ranking.end(),
                         [](const RankedDoc& a, const RankedDoc& b) { return a.rank < b.rank; });
    }
    try {
        run.validate();
    } catch (const Error& e) {
        throw Error(source + ": " + e.what());
    }
    return run;
}

Run read_trec_run(const std::filesystem::path& path)
{
    return parse_trec_run(read_file(path), path.string());
}

void write_trec_run(const Run& run, const std::filesystem::path& path)
{
    write_file(path, format_trec_run(run));
}

Run rank_candidates(const std::vector<PairScore>& scores, const std::vector<QueryRecord>& pools,
                    const std::string& tag)
{
    std::map<std::string, const QueryRecord*> by_id;
    for (const auto& q : pools) {
        by_id.emplace(q.query_id, &q);
    }
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto& s : scores) {
        if (!std::isfinite(s.score)) {
            throw Error("non-finite score for (" + s.query_id + ", " + s.doc_id + ")");
        }
        auto q = by_id.find(s.query_id);
        if (q == by_id.end()) {
            throw Error("score for unknown query '" + s.query_id + "'");
        }
        const auto& pool = q->second->candidate_ids;
        if (std::find(pool.begin(), pool.end(), s.doc_id) == pool.end()) {
            throw Error("score for (" + s.query_id + ", " + s.doc_id + ") outside the candidate pool");
        }
        if (!table[s.query_id].emplace(s.doc_id, s.score).second) {
            throw Error("duplicate score for (" + s.query_id + ", " + s.doc_id + ")");
        }
    }

    Run run;
    run.tag = tag;
    for (const auto& q : pools) {
        auto& per_doc = table[q.query_id];
        std::vector<RankedDoc> ranking;
        ranking.reserve(q.candidate_ids.size());
        for (const auto& did : q.candidate_ids) {
            auto it = per_doc.find(did);
            if (it == per_doc.end()) {
                throw Error("missing score for (" + q.query_id + ", " + did + ")");
            }
            ranking.push_back({did, it->second, 0});
        }
        std::sort(ranking.begin(), ranking.end(), [](const RankedDoc& a, const RankedDoc& b) {
            return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
        });
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            ranking[i].rank = i + 1;
        }
        run.rankings[q.query_id] = std::move(ranking);
    }
    return run;
}

Run perfect_ranking(const Corpus& corpus, const std::string& tag)
{
    if (!corpus.qrels) {
        throw Error("perfect ranking needs relevance judgments");
    }
    std::vector<PairScore> scores;
    for (const auto& q : corpus.queries) {
        std::vector<std::string> relevant;
        std::vector<std::string> other;
        for (const auto& did : q.candidate_ids) {
            (corpus.qrels->is_relevant(q.query_id, did) ? relevant : other).push_back(did);
        }
        std::sort(relevant.begin(), relevant.end());
        std::sort(other.begin(), other.end());
        relevant.insert(relevant.end(), other.begin(), other.end());
        const auto n = static_cast<double>(relevant.size());
        for (std::size_t i = 0; i < relevant.size(); ++i) {
            scores.push_back({q.query_id, relevant[i], n - static_cast<double>(i)});
        }
    }
    return rank_candidates(scores, corpus.queries, tag);
}

std::vector<PairScore> parse_external_scores(const std::string& contents, const Corpus& corpus,
                                             const std::string& source)
{
    std::map<std::string, std::set<std::string>> pools;
    for (const auto& q : corpus.queries) {
        pools[q.query_id].insert(q.candidate_ids.begin(), q.candidate_ids.end());
    }
    std::vector<PairScore> scores;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(source, line_no, "expected 'query_id<TAB>doc_id<TAB>score'");
        }
        PairScore s{std::string(fields[0]), std::string(fields[1]), 0.0};
        if (!parse_double(fields[2], s.score)) {
            throw ParseError(source, line_no, "unparsable score '" + std::string(fields[2]) + "'");
        }
        if (!std::isfinite(s.score)) {
            throw ParseError(source, line_no, "non-finite score '" + std::string(fields[2]) + "'");
        }
        auto pool = pools.find(s.query_id);
        if (pool == pools.end() || pool->second.count(s.doc_id) == 0) {
            throw ParseError(source, line_no, "unknown pair (" + s.query_id + ", " + s.doc_id + ")");
        }
        if (!seen.emplace(s.query_id, s.doc_id).second) {
            throw ParseError(source, line_no, "duplicate pair (" + s.query_id + ", " + s.doc_id + ")");
        }
        scores.push_back(std::move(s));
    }
    std::vector<std::string> missing;
    for (const auto& q : corpus.queries) {
        for (const auto& did : q.candidate_ids) {
            if (seen.count({q.query_id, did}) == 0) {
                missing.push_back("(" + q.query_id + ", " + did + ")");
            }
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
            list += (i > 0 ? " " : "") + missing[i];
        }
        if (missing.size() > 10) {
            list += " ...";
        }
        throw Error(source + ": " + std::to_string(missing.size()) + " missing pool pair(s) without a score: " + list);
    }
    return scores;
}

std::vector<PairScore> load_external_scores(const std::filesystem::path& path, const Corpus& corpus)
{
    return parse_external_scores(read_file(path), corpus, path.string());
}

PairInput build_pair_sequence(const TokenizedText& query, const TokenizedText& candidate)
{
    const auto budget_words = (kMaxSequenceLength - kControlMarkers) / kSubwordsPerWord;
    if (query.word_count > budget_words) {
        throw Error("query of " + std::to_string(query.word_count) + " words exceeds the " +
                    std::to_string(kMaxSequenceLength) + "-subword pair budget on its own");
    }
    PairInput input;
    input.query_tokens = query.tokens;
    const auto keep = std::min(candidate.word_count, budget_words - query.word_count);
    input.candidate_tokens.assign(candidate.tokens.begin(), candidate.tokens.begin() + static_cast<std::ptrdiff_t>(keep));
    input.truncated = keep < candidate.word_count;
    input.estimated_length =
        estimate_subword_count(input.query_tokens.size() + input.candidate_tokens.size()) + kControlMarkers;
    return input;
}

std::vector<PairRecord> build_pair_records(const Corpus& corpus,
                                           const std::map<std::string, std::string>& query_summaries,
                                           const std::map<std::string, std::string>& doc_summaries)
{
    std::map<std::string, TokenizedText> doc_tokens;
    auto tokens_of = [&](const std::string& doc_id) -> const TokenizedText& {
        auto it = doc_tokens.find(doc_id);
        if (it != doc_tokens.end()) {
            return it->second;
        }
        auto summary = doc_summaries.find(doc_id);
        if (summary == doc_summaries.end()) {
            throw Error("no summary for document '" + doc_id + "'");
        }
        return doc_tokens.emplace(doc_id, tokenize_words(summary->second)).first->second;
    };

    std::vector<PairRecord> records;
    for (const auto& q : corpus.queries) {
        auto qs = query_summaries.find(q.query_id);
        if (qs == query_summaries.end()) {
            throw Error("no summary for query '" + q.query_id + "'");
        }
        const auto query_tokens = tokenize_words(qs->second);
        for (const auto& did : q.candidate_ids) {
            PairRecord record{q.query_id, did, std::nullopt, build_pair_sequence(query_tokens, tokens_of(did))};
            if (corpus.qrels) {
                record.label = corpus.qrels->is_relevant(q.query_id, did);
            }
            records.push_back(std::move(record));
        }
    }
    return records;
}

std::string format_pairs_tsv(const std::vector<PairRecord>& records)
{
    auto join = [](const std::vector<std::string>& tokens) {
        std::string out;
        for (const auto& t : tokens) {
            if (!out.empty()) {
                out += ' ';
            }
            out += t;
        }
        return out;
    };
    std::string out;
    for (const auto& r : records) {
        out += r.query_id + "\t" + r.doc_id + "\t";
        if (r.label) {
            out += *r.label ? "1" : "0";
        }
        out += "\t" + join(r.input.query_tokens) + "\t" + join(r.input.candidate_tokens) + "\n";
    }
    return out;
}

}  // namespace legalsearch
