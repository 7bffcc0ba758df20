#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace legalsearch {

enum class TaskKind { case_law, statute };

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& name);

struct Document {
    std::string doc_id;
    std::string text;
    std::size_t word_count = 0;

    bool operator==(const Document&) const = default;
};

Document make_document(std::string doc_id, std::string text);

struct QueryRecord {
    std::string query_id;
    std::string text;
    std::vector<std::string> candidate_ids;

    bool operator==(const QueryRecord&) const = default;
};

/// Binary relevance judgments keyed by (query_id, doc_id). Pairs without a
/// judgment are treated as non-relevant.
class Qrels {
public:
    void set(const std::string& query_id, const std::string& doc_id, bool relevant);

    /// nullopt when the pair is unjudged.
    std::optional<bool> judgment(const std::string& query_id, const std::string& doc_id) const;
    bool is_relevant(const std::string& query_id, const std::string& doc_id) const;

    const std::set<std::string>& relevant(const std::string& query_id) const;
    std::size_t relevant_count(const std::string& query_id) const { return relevant(query_id).size(); }

    bool has_query(const std::string& query_id) const { return judgments_.count(query_id) != 0; }
    std::vector<std::string> query_ids() const;
    std::size_t judgment_count() const;

    const std::map<std::string, std::map<std::string, bool>>& judgments() const noexcept { return judgments_; }

    bool operator==(const Qrels& other) const { return judgments_ == other.judgments_; }

private:
    std::map<std::string, std::map<std::string, bool>> judgments_;
    std::map<std::string, std::set<std::string>> relevant_;
};

/// TREC qrels: `query_id 0 doc_id rel` per line, rel in {0,1}.
Qrels parse_qrels(const std::string& contents, const std::string& source = "<qrels>");
Qrels read_qrels(const std::filesystem::path& path);
std::string format_qrels(const Qrels& qrels);
void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

struct Corpus {
    TaskKind task_kind = TaskKind::case_law;
    std::map<std::string, Document> documents;
    std::vector<QueryRecord> queries;
    std::optional<Qrels> qrels;

    const Document& document(const std::string& doc_id) const;
    const QueryRecord* find_query(const std::string& query_id) const;

    bool operator==(const Corpus&) const = default;
};

/// Checks referential integrity and the per-task invariants; throws Error.
void validate(const Corpus& corpus);

/// Directory of `<query_id>/query.txt`, `<query_id>/candidates/<doc_id>.txt`
/// and optional `<query_id>/labels.txt`. When `expected_pool_size` is set,
/// every pool must have exactly that many candidates.
Corpus ingest_case_law(const std::filesystem::path& root,
                       std::optional<std::size_t> expected_pool_size = std::nullopt);

/// Articles and queries as `id<TAB>text` lines; every query is pooled
/// against all articles in file order.
Corpus ingest_statute(const std::filesystem::path& articles_path,
                      const std::filesystem::path& queries_path,
                      const std::optional<std::filesystem::path>& qrels_path = std::nullopt);

/// Persisted corpus directory: manifest.txt, documents.tsv, queries.tsv and
/// qrels.txt when labeled.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

struct SplitSpec {
    double train_fraction = 0.75;
    std::uint64_t rng_seed = 0;
};

/// Query-level split: a query and its whole pool land on one side.
std::pair<Corpus, Corpus> split_train_eval(const Corpus& corpus, const SplitSpec& spec);

/// Restricts a corpus to the given queries, keeping only reachable documents.
Corpus subset(const Corpus& corpus, const std::set<std::string>& query_ids);

struct LengthDistribution {
    std::vector<std::size_t> word_counts;  // sorted ascending
    std::size_t bin_width = 100;
    /// (bin lower edge, document count), empty bins omitted.
    std::vector<std::pair<std::size_t, std::size_t>> histogram;
    /// (length, fraction of documents with word_count <= length), one point
    /// per distinct length.
    std::vector<std::pair<std::size_t, double>> cdf;
    double median = 0.0;

    double cdf_at(std::size_t length) const;
};

LengthDistribution length_distribution(std::vector<std::size_t> word_counts, std::size_t bin_width = 100);

/// Word-length distribution over every document and query text.
LengthDistribution corpus_stats(const Corpus& corpus, std::size_t bin_width = 100);

std::string format_histogram_tsv(const LengthDistribution& dist);
std::string format_cdf_tsv(const LengthDistribution& dist);

}  // namespace legalsearch
