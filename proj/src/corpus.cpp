#include "legalsearch/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "legalsearch/text.hpp"
#include "legalsearch/tsv.hpp"

namespace fs = std::filesystem;

namespace legalsearch {
namespace {

constexpr const char* kManifestHeader = "legalsearch-corpus 1";

bool valid_id(const std::string& id)
{
    return !id.empty() && std::none_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Unbiased integer in [0, bound) from a fixed-algorithm engine, so splits do
// not depend on the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

struct TsvRecord {
    std::string id;
    std::string text;
};

std::vector<TsvRecord> read_id_text_tsv(const fs::path& path)
{
    auto contents = read_file(path);
    std::vector<TsvRecord> records;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(path.string(), line_no, "malformed line (no TAB)");
        }
        std::string id(line.substr(0, tab));
        if (!valid_id(id)) {
            throw ParseError(path.string(), line_no, "invalid id '" + id + "'");
        }
        if (!seen.insert(id).second) {
            throw ParseError(path.string(), line_no, "duplicate id '" + id + "'");
        }
        records.push_back({std::move(id), unescape_field(line.substr(tab + 1))});
    }
    return records;
}

}  // namespace

std::string to_string(TaskKind kind)
{
    return kind == TaskKind::case_law ? "case_law" : "statute";
}

TaskKind parse_task_kind(const std::string& name)
{
    if (name == "case_law") {
        return TaskKind::case_law;
    }
    if (name == "statute") {
        return TaskKind::statute;
    }
    throw Error("unknown task kind '" + name + "' (expected case_law or statute)");
}

Document make_document(std::string doc_id, std::string text)
{
    Document doc{std::move(doc_id), std::move(text), 0};
    doc.word_count = count_words(doc.text);
    return doc;
}

// Qrels ---------------------------------------------------------------------

void Qrels::set(const std::string& query_id, const std::string& doc_id, bool relevant)
{
    judgments_[query_id][doc_id] = relevant;
    auto& rel = relevant_[query_id];
    if (relevant) {
        rel.insert(doc_id);
    } else {
        rel.erase(doc_id);
    }
}

std::optional<bool> Qrels::judgment(const std::string& query_id, const std::string& doc_id) const
{
    auto q = judgments_.find(query_id);
    if (q == judgments_.end()) {
        return std::nullopt;
    }
    auto d = q->second.find(doc_id);
    if (d == q->second.end()) {
        return std::nullopt;
    }
    return d->second;
}

bool Qrels::is_relevant(const std::string& query_id, const std::string& doc_id) const
{
    return judgment(query_id, doc_id).value_or(false);
}

const std::set<std::string>& Qrels::relevant(const std::string& query_id) const
{
    static const std::set<std::string> empty;
    auto it = relevant_.find(query_id);
    return it == relevant_.end() ? empty : it->second;
}

std::vector<std::string> Qrels::query_ids() const
{
    std::vector<std::string> ids;
    ids.reserve(judgments_.size());
    for (const auto& [qid, _] : judgments_) {
        ids.push_back(qid);
    }
    return ids;
}

std::size_t Qrels::judgment_count() const
{
    std::size_t n = 0;
    for (const auto& [_, docs] : judgments_) {
        n += docs.size();
    }
    return n;
}

Qrels parse_qrels(const std::string& contents, const std::string& source)
{
    Qrels qrels;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        auto fields = split_whitespace(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError(source, line_no, "expected 'query_id 0 doc_id rel'");
        }
        std::size_t rel = 0;
        if (!parse_size(fields[3], rel) || rel > 1) {
            throw ParseError(source, line_no, "relevance must be 0 or 1");
        }
        std::string qid(fields[0]);
        std::string did(fields[2]);
        if (!seen.emplace(qid, did).second) {
            throw ParseError(source, line_no, "duplicate judgment for (" + qid + ", " + did + ")");
        }
        qrels.set(qid, did, rel == 1);
    }
    return qrels;
}

Qrels read_qrels(const fs::path& path)
{
    return parse_qrels(read_file(path), path.string());
}

std::string format_qrels(const Qrels& qrels)
{
    std::string out;
    for (const auto& [qid, docs] : qrels.judgments()) {
        for (const auto& [did, rel] : docs) {
            out += qid;
            out += " 0 ";
            out += did;
            out += rel ? " 1\n" : " 0\n";
        }
    }
    return out;
}

void write_qrels(const Qrels& qrels, const fs::path& path)
{
    write_file(path, format_qrels(qrels));
}

// Corpus --------------------------------------------------------------------

const Document& Corpus::document(const std::string& doc_id) const
{
    auto it = documents.find(doc_id);
    if (it == documents.end()) {
        throw Error("unknown document '" + doc_id + "'");
    }
    return it->second;
}

const QueryRecord* Corpus::find_query(const std::string& query_id) const
{
    for (const auto& q : queries) {
        if (q.query_id == query_id) {
            return &q;
        }
    }
    return nullptr;
}

void validate(const Corpus& corpus)
{
    for (const auto& [key, doc] : corpus.documents) {
        if (!valid_id(doc.doc_id) || key != doc.doc_id) {
            throw Error("invalid document id '" + key + "'");
        }
        if (doc.word_count != count_words(doc.text)) {
            throw Error("stale word count for document '" + key + "'");
        }
    }
    std::set<std::string> query_ids;
    std::optional<std::size_t> pool_size;
    const std::vector<std::string>* shared_pool = nullptr;
    for (const auto& q : corpus.queries) {
        if (!valid_id(q.query_id)) {
            throw Error("invalid query id '" + q.query_id + "'");
        }
        if (!query_ids.insert(q.query_id).second) {
            throw Error("duplicate query id '" + q.query_id + "'");
        }
        if (q.candidate_ids.empty()) {
            throw Error("query '" + q.query_id + "' has an empty candidate pool");
        }
        std::set<std::string> pool;
        for (const auto& did : q.candidate_ids) {
            if (!pool.insert(did).second) {
                throw Error("duplicate candidate '" + did + "' in pool of '" + q.query_id + "'");
            }
            if (corpus.documents.count(did) == 0) {
                throw Error("candidate '" + did + "' of '" + q.query_id + "' has no document");
            }
        }
        if (corpus.task_kind == TaskKind::case_law) {
            if (pool_size && *pool_size != q.candidate_ids.size()) {
                throw Error("pool of '" + q.query_id + "' has " + std::to_string(q.candidate_ids.size()) +
                            " candidates, expected " + std::to_string(*pool_size));
            }
            pool_size = q.candidate_ids.size();
        } else {
            if (shared_pool && *shared_pool != q.candidate_ids) {
                throw Error("statute query '" + q.query_id + "' does not use the shared article pool");
            }
            shared_pool = &q.candidate_ids;
        }
    }
    if (!corpus.qrels) {
        return;
    }
    for (const auto& [qid, docs] : corpus.qrels->judgments()) {
        const auto* q = corpus.find_query(qid);
        if (q == nullptr) {
            throw Error("judgment for unknown query '" + qid + "'");
        }
        for (const auto& [did, _] : docs) {
            if (std::find(q->candidate_ids.begin(), q->candidate_ids.end(), did) == q->candidate_ids.end()) {
                throw Error("judged document '" + did + "' is not in the pool of '" + qid + "'");
            }
        }
    }
    for (const auto& q : corpus.queries) {
        if (corpus.qrels->relevant_count(q.query_id) == 0) {
            throw Error("query '" + q.query_id + "' has no relevant documents");
        }
    }
}

Corpus ingest_case_law(const fs::path& root, std::optional<std::size_t> expected_pool_size)
{
    if (!fs::is_directory(root)) {
        throw Error("case-law root is not a directory: " + root.string());
    }
    std::vector<fs::path> query_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) {
            query_dirs.push_back(entry.path());
        }
    }
    std::sort(query_dirs.begin(), query_dirs.end());
    if (query_dirs.empty()) {
        throw Error("no query directories under " + root.string());
    }

    Corpus corpus;
    corpus.task_kind = TaskKind::case_law;
    Qrels qrels;
    bool labeled = false;
    std::vector<std::string> unlabeled_queries;

    for (const auto& dir : query_dirs) {
        QueryRecord query;
        query.query_id = dir.filename().string();
        auto query_file = dir / "query.txt";
        if (!fs::is_regular_file(query_file)) {
            throw Error("missing query.txt in " + dir.string());
        }
        query.text = read_file(query_file);

        std::vector<fs::path> candidate_files;
        if (fs::is_directory(dir / "candidates")) {
            for (const auto& entry : fs::directory_iterator(dir / "candidates")) {
                if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                    candidate_files.push_back(entry.path());
                }
            }
        }
        if (candidate_files.empty()) {
            throw Error("empty candidate directory for query '" + query.query_id + "'");
        }
        std::sort(candidate_files.begin(), candidate_files.end());
        for (const auto& file : candidate_files) {
            auto doc = make_document(file.stem().string(), read_file(file));
            auto [it, inserted] = corpus.documents.emplace(doc.doc_id, doc);
            if (!inserted && it->second.text != doc.text) {
                throw Error("duplicate doc_id '" + doc.doc_id + "' with differing text (" + file.string() + ")");
            }
            query.candidate_ids.push_back(doc.doc_id);
        }

        auto labels_file = dir / "labels.txt";
        if (fs::is_regular_file(labels_file)) {
            labeled = true;
            auto contents = read_file(labels_file);
            std::set<std::string> relevant;
            for (auto line : lines_of(contents)) {
                auto id = trim(line);
                if (id.empty()) {
                    continue;
                }
                if (std::find(query.candidate_ids.begin(), query.candidate_ids.end(), id) == query.candidate_ids.end()) {
                    throw Error("unknown labeled candidate '" + id + "' for query '" + query.query_id + "'");
                }
                relevant.insert(id);
            }
            for (const auto& did : query.candidate_ids) {
                qrels.set(query.query_id, did, relevant.count(did) != 0);
            }
        } else {
            unlabeled_queries.push_back(query.query_id);
        }
        if (expected_pool_size && query.candidate_ids.size() != *expected_pool_size) {
            throw Error("pool of '" + query.query_id + "' has " + std::to_string(query.candidate_ids.size()) +
                        " candidates, expected " + std::to_string(*expected_pool_size));
        }
        corpus.queries.push_back(std::move(query));
    }
    if (labeled) {
        if (!unlabeled_queries.empty()) {
            throw Error("query '" + unlabeled_queries.front() + "' has no labels.txt in a labeled corpus");
        }
        corpus.qrels = std::move(qrels);
    }
    validate(corpus);
    return corpus;
}

Corpus ingest_statute(const fs::path& articles_path, const fs::path& queries_path,
                      const std::optional<fs::path>& qrels_path)
{
    Corpus corpus;
    corpus.task_kind = TaskKind::statute;
    std::vector<std::string> pool;
    for (auto& rec : read_id_text_tsv(articles_path)) {
        pool.push_back(rec.id);
        corpus.documents.emplace(rec.id, make_document(rec.id, std::move(rec.text)));
    }
    if (pool.empty()) {
        throw Error("no articles in " + articles_path.string());
    }
    for (auto& rec : read_id_text_tsv(queries_path)) {
        corpus.queries.push_back({rec.id, std::move(rec.text), pool});
    }
    if (qrels_path) {
        auto qrels = read_qrels(*qrels_path);
        for (const auto& [qid, docs] : qrels.judgments()) {
            if (corpus.find_query(qid) == nullptr) {
                throw Error("qrels reference unknown query '" + qid + "'");
            }
            for (const auto& [did, _] : docs) {
                if (corpus.documents.count(did) == 0) {
                    throw Error("qrels reference unknown article '" + did + "'");
                }
            }
        }
        corpus.qrels = std::move(qrels);
    }
    validate(corpus);
    return corpus;
}

// Persistence ---------------------------------------------------------------

void save_corpus(const Corpus& corpus, const fs::path& dir)
{
    validate(corpus);
    fs::create_directories(dir);
    write_file(dir / "manifest.txt", std::string(kManifestHeader) + "\ntask " + to_string(corpus.task_kind) + "\n");

    std::string docs;
    for (const auto& [id, doc] : corpus.documents) {
        docs += id + "\t" + escape_field(doc.text) + "\n";
    }
    write_file(dir / "documents.tsv", docs);

    std::string queries;
    for (const auto& q : corpus.queries) {
        queries += q.query_id + "\t" + escape_field(q.text) + "\t";
        for (std::size_t i = 0; i < q.candidate_ids.size(); ++i) {
            if (i > 0) {
                queries += ' ';
            }
            queries += q.candidate_ids[i];
        }
        queries += '\n';
    }
    write_file(dir / "queries.tsv", queries);

    if (corpus.qrels) {
        write_qrels(*corpus.qrels, dir / "qrels.txt");
    } else {
        fs::remove(dir / "qrels.txt");
    }
}

Corpus load_corpus(const fs::path& dir)
{
    auto manifest_path = dir / "manifest.txt";
    const auto manifest_text = read_file(manifest_path);
    auto manifest = lines_of(manifest_text);
    if (manifest.size() < 2 || manifest[0] != kManifestHeader || manifest[1].substr(0, 5) != "task ") {
        throw ParseError(manifest_path.string(), 1, "not a corpus manifest");
    }
    Corpus corpus;
    corpus.task_kind = parse_task_kind(std::string(manifest[1].substr(5)));

    for (auto& rec : read_id_text_tsv(dir / "documents.tsv")) {
        corpus.documents.emplace(rec.id, make_document(rec.id, std::move(rec.text)));
    }

    auto queries_path = dir / "queries.tsv";
    auto contents = read_file(queries_path);
    std::size_t line_no = 0;
    for (auto line : lines_of(contents)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(queries_path.string(), line_no, "expected query_id, text and candidates");
        }
        QueryRecord q{std::string(fields[0]), unescape_field(fields[1]), {}};
        for (auto id : split_whitespace(fields[2])) {
            q.candidate_ids.emplace_back(id);
        }
        corpus.queries.push_back(std::move(q));
    }
    if (fs::exists(dir / "qrels.txt")) {
        corpus.qrels = read_qrels(dir / "qrels.txt");
    }
    validate(corpus);
    return corpus;
}

// Splitting -----------------------------------------------------------------

Corpus subset(const Corpus& corpus, const std::set<std::string>& query_ids)
{
    Corpus out;
    out.task_kind = corpus.task_kind;
    if (corpus.qrels) {
        out.qrels.emplace();
    }
    for (const auto& q : corpus.queries) {
        if (query_ids.count(q.query_id) == 0) {
            continue;
        }
        out.queries.push_back(q);
        for (const auto& did : q.candidate_ids) {
            out.documents.emplace(did, corpus.documents.at(did));
        }
        if (corpus.qrels && corpus.qrels->has_query(q.query_id)) {
            for (const auto& [did, rel] : corpus.qrels->judgments().at(q.query_id)) {
                out.qrels->set(q.query_id, did, rel);
            }
        }
    }
    return out;
}

std::pair<Corpus, Corpus> split_train_eval(const Corpus& corpus, const SplitSpec& spec)
{
    if (!corpus.qrels) {
        throw Error("cannot split a corpus without relevance judgments");
    }
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw Error("train_fraction must lie strictly between 0 and 1");
    }
    std::vector<std::string> ids;
    for (const auto& q : corpus.queries) {
        ids.push_back(q.query_id);
    }
    std::mt19937_64 rng(spec.rng_seed);
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::swap(ids[i - 1], ids[bounded(rng, i)]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(ids.size())));
    std::set<std::string> train(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::set<std::string> eval(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    return {subset(corpus, train), subset(corpus, eval)};
}

// Length statistics -----------------------------------------------------------

double LengthDistribution::cdf_at(std::size_t length) const
{
    double value = 0.0;
    for (const auto& [len, frac] : cdf) {
        if (len > length) {
            break;
        }
        value = frac;
    }
    return value;
}

LengthDistribution length_distribution(std::vector<std::size_t> word_counts, std::size_t bin_width)
{
    if (word_counts.empty()) {
        throw Error("length statistics need at least one document");
    }
    if (bin_width == 0) {
        throw Error("histogram bin width must be positive");
    }
    std::sort(word_counts.begin(), word_counts.end());
    LengthDistribution dist;
    dist.bin_width = bin_width;
    const auto n = word_counts.size();
    dist.median = n % 2 == 1 ? static_cast<double>(word_counts[n / 2])
                             : (static_cast<double>(word_counts[n / 2 - 1]) + static_cast<double>(word_counts[n / 2])) / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto bin = word_counts[i] / bin_width * bin_width;
        if (dist.histogram.empty() || dist.histogram.back().first != bin) {
            dist.histogram.emplace_back(bin, 0);
        }
        ++dist.histogram.back().second;
        if (i + 1 == n || word_counts[i + 1] != word_counts[i]) {
            dist.cdf.emplace_back(word_counts[i], static_cast<double>(i + 1) / static_cast<double>(n));
        }
    }
    dist.word_counts = std::move(word_counts);
    return dist;
}

LengthDistribution corpus_stats(const Corpus& corpus, std::size_t bin_width)
{
    std::vector<std::size_t> counts;
    counts.reserve(corpus.documents.size() + corpus.queries.size());
    for (const auto& [_, doc] : corpus.documents) {
        counts.push_back(doc.word_count);
    }
    for (const auto& q : corpus.queries) {
        counts.push_back(count_words(q.text));
    }
    if (counts.empty()) {
        throw Error("corpus is empty");
    }
    return length_distribution(std::move(counts), bin_width);
}

std::string format_histogram_tsv(const LengthDistribution& dist)
{
    std::string out = "word_count\tdoc_count\n";
    for (const auto& [bin, count] : dist.histogram) {
        out += std::to_string(bin) + "\t" + std::to_string(count) + "\n";
    }
    return out;
}

std::string format_cdf_tsv(const LengthDistribution& dist)
{
    std::string out = "word_count\tcdf\n";
    for (const auto& [len, frac] : dist.cdf) {
        out += std::to_string(len) + "\t" + format_double(frac) + "\n";
    }
    return out;
}

}  // namespace legalsearch
