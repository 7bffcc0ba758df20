#include <doctest.h>

#include <cmath>
#include <random>

#include "legalsearch/bm25.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace legalsearch;

namespace {

std::map<std::string, std::string> random_docs(std::mt19937_64& rng, std::size_t n, std::size_t vocab)
{
    std::map<std::string, std::string> docs;
    for (std::size_t i = 0; i < n; ++i) {
        docs["d" + synthetic::pad(i)] = synthetic::random_text(rng, 1 + rng() % 4, 1 + rng() % 12, vocab);
    }
    return docs;
}

}  // namespace

TEST_CASE("build_index postings")
{
    auto index = InvertedIndex::build({{"d1", "a b"}, {"d2", "b c"}}, IndexField::full_text);
    CHECK(index.doc_count() == 2);
    CHECK(index.avgdl() == 2.0);
    CHECK(index.postings().at("a") == std::vector<Posting>{{0, 1}});
    CHECK(index.postings().at("b") == std::vector<Posting>{{0, 1}, {1, 1}});
    CHECK(index.postings().at("c") == std::vector<Posting>{{1, 1}});
    CHECK(index.document_frequency("b") == 2);
    CHECK(index.term_frequency("c", "d1") == 0);

    auto empty_doc = InvertedIndex::build({{"e", ""}}, IndexField::summary);
    CHECK(empty_doc.postings().empty());
    CHECK(empty_doc.doc_length("e") == 0);
    CHECK(empty_doc.avgdl() == 0.0);
    CHECK(bm25_score(empty_doc, tokenize_words("anything"), "e") == 0.0);

    CHECK_THROWS_AS(InvertedIndex::build({}, IndexField::full_text), Error);
}

TEST_CASE("postings agree with a naive recount")
{
    std::mt19937_64 rng(100);
    auto docs = random_docs(rng, 100, 80);
    auto index = InvertedIndex::build(docs, IndexField::full_text);
    CHECK(index.doc_count() == 100);
    std::map<std::string, std::size_t> corpus_counts;
    for (const auto& [_, text] : docs) {
        for (const auto& t : tokenize_words(text).tokens) {
            ++corpus_counts[t];
        }
    }
    REQUIRE(index.postings().size() == corpus_counts.size());
    for (const auto& [term, list] : index.postings()) {
        std::size_t total = 0;
        for (const auto& p : list) {
            total += p.tf;
        }
        CHECK(total == corpus_counts.at(term));
    }
}

TEST_CASE("bm25_score worked examples")
{
    auto index = InvertedIndex::build({{"only", "x"}}, IndexField::full_text);
    const double score = bm25_score(index, tokenize_words("x"), "only");
    CHECK(std::abs(score - std::log(4.0 / 3.0)) < 1e-12);
    CHECK(std::abs(score - 0.28768207245178) < 1e-9);
    CHECK(bm25_score(index, tokenize_words("unseen words"), "only") == 0.0);
    CHECK_THROWS_AS(bm25_score(index, tokenize_words("x"), "missing"), Error);
}

TEST_CASE("bm25_score equals a full-scan computation")
{
    std::mt19937_64 rng(7);
    for (int corpus_trial = 0; corpus_trial < 5; ++corpus_trial) {
        auto docs = random_docs(rng, 3 + rng() % 47, 30);
        auto index = InvertedIndex::build(docs, IndexField::full_text);
        for (int q = 0; q < 10; ++q) {
            auto query = synthetic::random_text(rng, 1, 1 + rng() % 8, 35);
            Bm25Params params{0.5 + static_cast<double>(rng() % 20) / 10.0, static_cast<double>(rng() % 11) / 10.0};
            for (const auto& [id, _] : docs) {
                CHECK(std::abs(bm25_score(index, tokenize_words(query), id, params) -
                               oracle::naive_bm25(docs, query, id, params.k1, params.b)) < 1e-9);
            }
        }
    }
}

TEST_CASE("bm25 properties")
{
    SUBCASE("idf is non-negative")
    {
        for (std::size_t n = 1; n < 60; ++n) {
            for (std::size_t df = 1; df <= n; ++df) {
                CHECK(bm25_idf(df, n) >= 0.0);
            }
        }
    }
    SUBCASE("an extra query-term occurrence never lowers the score at fixed length")
    {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::string> words;
            const auto n = 2 + rng() % 15;
            for (std::size_t i = 0; i < n; ++i) {
                words.push_back("w" + std::to_string(rng() % 6));
            }
            auto replaced = words;
            auto pos = rng() % n;
            if (replaced[pos] == "w0") {
                continue;
            }
            replaced[pos] = "w0";
            std::map<std::string, std::string> before{{"x", synthetic::join_words(words)}, {"y", "w0 w1 w9"}};
            std::map<std::string, std::string> after{{"x", synthetic::join_words(replaced)}, {"y", "w0 w1 w9"}};
            const auto query = tokenize_words("w0");
            auto bi = InvertedIndex::build(before, IndexField::full_text);
            auto ai = InvertedIndex::build(after, IndexField::full_text);
            if (bi.document_frequency("w0") != ai.document_frequency("w0")) {
                continue;
            }
            CHECK(bm25_score(ai, query, "x") >= bm25_score(bi, query, "x"));
        }
    }
}

TEST_CASE("score_pool")
{
    QueryRecord query{"q", "refugee claim board", {"c1", "c2", "c3"}};
    std::map<std::string, std::string> docs{
        {"c1", "the refugee claim was heard by the board"},
        {"c2", "the claim was dismissed"},
        {"c3", "costs were awarded"},
        {"q", "refugee claim board"},
    };
    auto index = InvertedIndex::build(docs, IndexField::full_text);
    auto scores = score_pool(index, query);
    REQUIRE(scores.size() == 3);
    CHECK(scores[0].doc_id == "c1");
    CHECK(scores[0].score > scores[1].score);
    CHECK(scores[1].score > scores[2].score);
    CHECK(scores[2].score == 0.0);
    for (const auto& s : scores) {
        CHECK(s.query_id == "q");
        CHECK(s.score == doctest::Approx(oracle::naive_bm25(docs, query.text, s.doc_id)).epsilon(1e-12));
    }

    QueryRecord nothing_shared{"q2", "xylophone", {"c1", "c2", "c3"}};
    for (const auto& s : score_pool(index, nothing_shared)) {
        CHECK(s.score == 0.0);
    }

    QueryRecord missing{"q3", "claim", {"c1", "c9"}};
    CHECK_THROWS_AS(score_pool(index, missing), Error);

    PoolScoringOptions truncated;
    truncated.max_query_tokens = 1;
    auto only_first = score_pool(index, query, truncated);
    CHECK(only_first[0].score == doctest::Approx(bm25_score(index, tokenize_words("refugee"), "c1")));

    std::map<std::string, std::string> big;
    QueryRecord pool200{"q", "term1 term2", {}};
    for (int i = 0; i < 200; ++i) {
        auto id = "d" + synthetic::pad(static_cast<std::size_t>(i));
        big[id] = "term" + std::to_string(i % 7);
        pool200.candidate_ids.push_back(id);
    }
    CHECK(score_pool(InvertedIndex::build(big, IndexField::full_text), pool200).size() == 200);
}

TEST_CASE("index persistence round-trips")
{
    std::mt19937_64 rng(12);
    auto docs = random_docs(rng, 30, 50);
    auto index = InvertedIndex::build(docs, IndexField::summary);
    testing::TempDir dir;
    index.save(dir / "index.idx");
    auto loaded = InvertedIndex::load(dir / "index.idx");
    CHECK(loaded == index);
    CHECK(loaded.field() == IndexField::summary);
    CHECK(loaded.avgdl() == index.avgdl());
    const auto q = tokenize_words("term1 term7 term30");
    for (const auto& [id, _] : docs) {
        CHECK(bm25_score(loaded, q, id) == bm25_score(index, q, id));
    }

    write_file(dir / "bad.idx", "legalsearch-index 2\n");
    CHECK_THROWS_AS(InvertedIndex::load(dir / "bad.idx"), ParseError);
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS((Bm25Params{-1.0, 0.5}.validate()), Error);
    CHECK_THROWS_AS((Bm25Params{1.2, 1.5}.validate()), Error);
    CHECK_NOTHROW((Bm25Params{0.0, 0.0}.validate()));
}
