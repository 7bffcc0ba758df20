#include <doctest.h>

#include <random>

#include "legalsearch/corpus.hpp"
#include "legalsearch/tsv.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace legalsearch;
namespace fs = std::filesystem;

namespace {

// Two queries with three candidates each; d2 is shared between the pools.
void write_minimal_layout(const fs::path& root)
{
    write_file(root / "q1" / "query.txt", "The applicant seeks review of the officer's decision.");
    write_file(root / "q1" / "candidates" / "d1.txt", "Judicial review of a visa officer decision.");
    write_file(root / "q1" / "candidates" / "d2.txt", "A refugee claim was dismissed.");
    write_file(root / "q1" / "candidates" / "d3.txt", "Costs were awarded.");
    write_file(root / "q1" / "labels.txt", "d1\n");
    write_file(root / "q2" / "query.txt", "A refugee claimant challenges the board.");
    write_file(root / "q2" / "candidates" / "d2.txt", "A refugee claim was dismissed.");
    write_file(root / "q2" / "candidates" / "d4.txt", "The board erred in law.");
    write_file(root / "q2" / "candidates" / "d5.txt", "Procedural fairness was breached.");
    write_file(root / "q2" / "labels.txt", "d4\n\n");
}

void write_statute_files(const fs::path& dir)
{
    write_file(dir / "articles.tsv",
               "A1\tA person may not waive rights.\nA2\tA contract is formed by offer and acceptance.\n"
               "A3\tA minor needs consent.\nA4\tDamages are compensatory.\nA5\tPossession transfers on delivery.\n");
    write_file(dir / "queries.tsv", "H1\tCan a minor sign a contract alone?\nH2\tWhen does ownership pass?\n");
    write_file(dir / "qrels.txt", "H1 0 A3 1\nH2 0 A5 1\nH2 0 A1 0\n");
}

}  // namespace

TEST_CASE("ingest_case_law on a minimal layout")
{
    testing::TempDir dir;
    write_minimal_layout(dir.path());
    auto corpus = ingest_case_law(dir.path());
    CHECK(corpus.task_kind == TaskKind::case_law);
    REQUIRE(corpus.queries.size() == 2);
    CHECK(corpus.documents.size() == 5);
    CHECK(corpus.queries[0].candidate_ids == std::vector<std::string>{"d1", "d2", "d3"});
    REQUIRE(corpus.qrels);
    CHECK(corpus.qrels->relevant_count("q1") == 1);
    CHECK(corpus.qrels->relevant_count("q2") == 1);
    CHECK(corpus.qrels->is_relevant("q2", "d4"));
    CHECK(corpus.qrels->judgment("q1", "d2") == false);
    CHECK(corpus.document("d1").word_count == 7);
    CHECK_NOTHROW(ingest_case_law(dir.path(), 3));
    CHECK_THROWS_AS(ingest_case_law(dir.path(), 200), Error);
}

TEST_CASE("ingest_case_law errors")
{
    SUBCASE("label naming an unknown candidate")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        write_file(dir / "q1" / "labels.txt", "d9\n");
        CHECK_THROWS_WITH_AS(ingest_case_law(dir.path()), doctest::Contains("unknown labeled candidate"), Error);
    }
    SUBCASE("missing query.txt")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        fs::remove(dir / "q2" / "query.txt");
        CHECK_THROWS_WITH_AS(ingest_case_law(dir.path()), doctest::Contains("missing query.txt"), Error);
    }
    SUBCASE("empty candidate directory")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        fs::remove_all(dir / "q2" / "candidates");
        fs::create_directories(dir / "q2" / "candidates");
        CHECK_THROWS_WITH_AS(ingest_case_law(dir.path()), doctest::Contains("empty candidate directory"), Error);
    }
    SUBCASE("shared doc_id with differing text")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        write_file(dir / "q2" / "candidates" / "d2.txt", "Something else entirely.");
        CHECK_THROWS_WITH_AS(ingest_case_law(dir.path()), doctest::Contains("differing text"), Error);
    }
    SUBCASE("query without relevant documents")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        write_file(dir / "q2" / "labels.txt", "\n");
        CHECK_THROWS_WITH_AS(ingest_case_law(dir.path()), doctest::Contains("no relevant documents"), Error);
    }
    SUBCASE("unequal pool sizes")
    {
        testing::TempDir dir;
        write_minimal_layout(dir.path());
        write_file(dir / "q2" / "candidates" / "d6.txt", "Extra.");
        CHECK_THROWS_AS(ingest_case_law(dir.path()), Error);
    }
}

TEST_CASE("unlabeled case-law corpus has no qrels")
{
    testing::TempDir dir;
    write_minimal_layout(dir.path());
    fs::remove(dir / "q1" / "labels.txt");
    fs::remove(dir / "q2" / "labels.txt");
    auto corpus = ingest_case_law(dir.path());
    CHECK_FALSE(corpus.qrels.has_value());
    CHECK_THROWS_AS(split_train_eval(corpus, {}), Error);
}

TEST_CASE("ingest_statute pools every query against all articles")
{
    testing::TempDir dir;
    write_statute_files(dir.path());
    auto corpus = ingest_statute(dir / "articles.tsv", dir / "queries.tsv", dir / "qrels.txt");
    CHECK(corpus.task_kind == TaskKind::statute);
    REQUIRE(corpus.queries.size() == 2);
    for (const auto& q : corpus.queries) {
        CHECK(q.candidate_ids == std::vector<std::string>{"A1", "A2", "A3", "A4", "A5"});
    }
    CHECK(corpus.qrels->relevant_count("H1") == 1);
    CHECK(corpus.qrels->relevant_count("H2") == 1);
    CHECK(corpus.qrels->judgment_count() == 3);

    auto unlabeled = ingest_statute(dir / "articles.tsv", dir / "queries.tsv");
    CHECK_FALSE(unlabeled.qrels);
}

TEST_CASE("ingest_statute errors")
{
    testing::TempDir dir;
    write_statute_files(dir.path());
    SUBCASE("qrels naming an unknown article")
    {
        write_file(dir / "qrels.txt", "H1 0 A999 1\nH2 0 A5 1\n");
        CHECK_THROWS_WITH_AS(ingest_statute(dir / "articles.tsv", dir / "queries.tsv", dir / "qrels.txt"),
                             doctest::Contains("unknown article"), Error);
    }
    SUBCASE("line without TAB reports its line number")
    {
        write_file(dir / "articles.tsv", "A1\tfine\nA2 missing tab\n");
        try {
            ingest_statute(dir / "articles.tsv", dir / "queries.tsv");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("no TAB") != std::string::npos);
        }
    }
    SUBCASE("duplicate id")
    {
        write_file(dir / "queries.tsv", "H1\tone\nH1\ttwo\n");
        CHECK_THROWS_WITH_AS(ingest_statute(dir / "articles.tsv", dir / "queries.tsv"),
                             doctest::Contains("duplicate id"), Error);
    }
    SUBCASE("bad relevance value")
    {
        write_file(dir / "qrels.txt", "H1 0 A3 2\n");
        CHECK_THROWS_AS(ingest_statute(dir / "articles.tsv", dir / "queries.tsv", dir / "qrels.txt"), ParseError);
    }
}

TEST_CASE("persisted corpora round-trip")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto corpus = synthetic::labeled_corpus(seed, 6, 5);
        corpus.queries[0].text += "\twith a tab\nand a newline \\ backslash";
        testing::TempDir dir;
        save_corpus(corpus, dir.path());
        CHECK(load_corpus(dir.path()) == corpus);
    }
    testing::TempDir statute_dir;
    write_statute_files(statute_dir.path());
    auto statute = ingest_statute(statute_dir / "articles.tsv", statute_dir / "queries.tsv", statute_dir / "qrels.txt");
    testing::TempDir dir;
    save_corpus(statute, dir.path());
    CHECK(load_corpus(dir.path()) == statute);
}

TEST_CASE("qrels format round-trips")
{
    const std::string text = "q1 0 d1 1\nq1 0 d2 0\nq2 0 d9 1\n";
    CHECK(format_qrels(parse_qrels(text)) == text);
    CHECK(parse_qrels("q1\t0  d1 1\n").is_relevant("q1", "d1"));
    CHECK_THROWS_AS(parse_qrels("q1 0 d1\n"), ParseError);
    CHECK_THROWS_AS(parse_qrels("q1 0 d1 1\nq1 0 d1 0\n"), ParseError);
}

TEST_CASE("split_train_eval")
{
    auto corpus = synthetic::labeled_corpus(3, 4, 3);
    auto [train, eval] = split_train_eval(corpus, {0.75, 7});
    CHECK(train.queries.size() == 3);
    CHECK(eval.queries.size() == 1);
    CHECK_NOTHROW(validate(train));
    CHECK_NOTHROW(validate(eval));

    auto [train2, eval2] = split_train_eval(corpus, {0.75, 7});
    CHECK(train2 == train);
    CHECK(eval2 == eval);

    CHECK_THROWS_AS(split_train_eval(corpus, {1.0, 7}), Error);
    CHECK_THROWS_AS(split_train_eval(corpus, {0.0, 7}), Error);

    auto big = synthetic::labeled_corpus(9, 285, 2, 1);
    auto [big_train, big_eval] = split_train_eval(big, {0.75, 1});
    CHECK(big_train.queries.size() == 214);
    CHECK(big_eval.queries.size() == 71);
}

TEST_CASE("split property: disjoint, complete, self-contained")
{
    auto corpus = synthetic::labeled_corpus(21, 17, 4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double fraction = 0.1 + 0.8 * static_cast<double>(seed % 9) / 8.0;
        auto [train, eval] = split_train_eval(corpus, {fraction, seed});
        std::set<std::string> a;
        std::set<std::string> b;
        for (const auto& q : train.queries) {
            a.insert(q.query_id);
        }
        for (const auto& q : eval.queries) {
            b.insert(q.query_id);
        }
        std::set<std::string> all = a;
        all.insert(b.begin(), b.end());
        CHECK(all.size() == corpus.queries.size());
        CHECK(a.size() + b.size() == corpus.queries.size());
        CHECK(a.size() == static_cast<std::size_t>(std::llround(fraction * 17.0)));
        for (const auto* side : {&train, &eval}) {
            std::set<std::string> reachable;
            for (const auto& q : side->queries) {
                reachable.insert(q.candidate_ids.begin(), q.candidate_ids.end());
            }
            std::set<std::string> docs;
            for (const auto& [id, _] : side->documents) {
                docs.insert(id);
            }
            CHECK(docs == reachable);
        }
    }
}

TEST_CASE("length distribution")
{
    auto dist = length_distribution({30, 10, 20}, 10);
    CHECK(dist.median == 20.0);
    CHECK(dist.cdf_at(20) == doctest::Approx(2.0 / 3.0));
    CHECK(dist.cdf_at(9) == 0.0);
    CHECK(dist.cdf_at(30) == 1.0);
    CHECK(dist.histogram == std::vector<std::pair<std::size_t, std::size_t>>{{10, 1}, {20, 1}, {30, 1}});

    auto single = length_distribution({42});
    CHECK(single.median == 42.0);
    CHECK(single.cdf.size() == 1);
    CHECK(single.cdf_at(41) == 0.0);
    CHECK(single.cdf_at(42) == 1.0);

    CHECK(length_distribution({1, 2, 3, 10}).median == 2.5);
    CHECK_THROWS_AS(length_distribution({}), Error);

    CHECK(format_histogram_tsv(dist) == "word_count\tdoc_count\n10\t1\n20\t1\n30\t1\n");
    CHECK(format_cdf_tsv(single) == "word_count\tcdf\n42\t1\n");
}

TEST_CASE("corpus_stats covers documents and queries")
{
    testing::TempDir dir;
    write_minimal_layout(dir.path());
    auto corpus = ingest_case_law(dir.path());
    auto dist = corpus_stats(corpus);
    CHECK(dist.word_counts.size() == corpus.documents.size() + corpus.queries.size());
    CHECK_THROWS_AS(corpus_stats(Corpus{}), Error);
}
