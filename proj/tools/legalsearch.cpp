// legalsearch: batch driver for the retrieval experiments.
//
//   legalsearch ingest  --task case_law --input DIR --out OUT
//   legalsearch summarize --out OUT --budget 180
//   legalsearch score --mode bm25_summary --out OUT
//   legalsearch eval --run OUT/run_bm25_summary.txt --out OUT
//
// Every command reads the corpus from OUT/corpus unless `corpus` is set, and
// writes fixed file names under OUT.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "legalsearch/bm25.hpp"
#include "legalsearch/config.hpp"
#include "legalsearch/corpus.hpp"
#include "legalsearch/eval.hpp"
#include "legalsearch/pipeline.hpp"
#include "legalsearch/ranker.hpp"
#include "legalsearch/stats.hpp"
#include "legalsearch/summarize.hpp"
#include "legalsearch/tsv.hpp"

namespace fs = std::filesystem;
using namespace legalsearch;

namespace {

struct Options {
    std::string config_file;
    std::map<std::string, std::string> overrides;  // config key -> flag value

    std::string mode;
    std::string run;
    std::string run_a;
    std::string run_b;
    std::string metric = "map";
    std::string scores;
    std::string index;
    std::optional<std::size_t> pool_size;
    bool split = false;
};

PipelineConfig resolve(const Options& opts)
{
    PipelineConfig config;
    if (!opts.config_file.empty()) {
        config = PipelineConfig::load(opts.config_file);
    }
    for (const auto& [key, value] : opts.overrides) {
        config.set(key, value);
    }
    return config;
}

fs::path corpus_dir(const PipelineConfig& config)
{
    return config.corpus.empty() ? config.out / "corpus" : config.corpus;
}

fs::path summaries_dir(const PipelineConfig& config)
{
    return config.summaries.empty() ? config.out : config.summaries;
}

void require_exists(const fs::path& path, const std::string& what)
{
    if (path.empty()) {
        throw Error(what + " not set");
    }
    if (!fs::exists(path)) {
        throw Error(what + " does not exist: " + path.string());
    }
}

Corpus open_corpus(const PipelineConfig& config)
{
    const auto dir = corpus_dir(config);
    require_exists(dir, "corpus directory");
    auto corpus = load_corpus(dir);
    if (!config.qrels.empty()) {
        require_exists(config.qrels, "qrels file");
        corpus.qrels = read_qrels(config.qrels);
        validate(corpus);
    }
    return corpus;
}

const Qrels& require_qrels(const Corpus& corpus)
{
    if (!corpus.qrels) {
        throw Error("corpus has no relevance judgments (set qrels or ingest labels)");
    }
    return *corpus.qrels;
}

SummarySet open_summaries(const PipelineConfig& config)
{
    const auto dir = summaries_dir(config);
    if (!fs::exists(dir / "summaries.tsv") || !fs::exists(dir / "query_summaries.tsv")) {
        throw Error("no summaries in " + dir.string() + "; run `legalsearch summarize` first");
    }
    return load_summaries(config.summary, dir);
}

AbbreviationList abbreviations(const PipelineConfig& config)
{
    if (config.abbreviations.empty()) {
        return AbbreviationList::builtin();
    }
    require_exists(config.abbreviations, "abbreviation list");
    return AbbreviationList::load(config.abbreviations);
}

std::string report(const Corpus& corpus)
{
    std::size_t judgments = corpus.qrels ? corpus.qrels->judgment_count() : 0;
    return std::to_string(corpus.queries.size()) + " queries, " + std::to_string(corpus.documents.size()) +
           " docs, " + std::to_string(judgments) + " judgments";
}

void write_output(const fs::path& path, const std::string& contents)
{
    write_file(path, contents);
    std::cout << "wrote " << path.string() << "\n";
}

int cmd_ingest(const Options& opts)
{
    auto config = resolve(opts);
    Corpus corpus;
    if (config.task_kind == TaskKind::case_law) {
        require_exists(config.input, "case-law input directory");
        corpus = ingest_case_law(config.input, opts.pool_size);
    } else {
        require_exists(config.articles, "articles file");
        require_exists(config.queries, "queries file");
        std::optional<fs::path> qrels;
        if (!config.qrels.empty()) {
            require_exists(config.qrels, "qrels file");
            qrels = config.qrels;
        }
        corpus = ingest_statute(config.articles, config.queries, qrels);
    }
    const auto dir = corpus_dir(config);
    save_corpus(corpus, dir);
    std::cout << report(corpus) << "\n";
    std::cout << "wrote " << dir.string() << "\n";

    if (opts.split) {
        auto [train, eval] = split_train_eval(corpus, config.split);
        save_corpus(train, config.out / "train");
        save_corpus(eval, config.out / "eval");
        std::cout << "train: " << report(train) << "\n";
        std::cout << "eval: " << report(eval) << "\n";
    }
    return 0;
}

int cmd_stats(const Options& opts)
{
    auto config = resolve(opts);
    auto corpus = open_corpus(config);
    auto dist = corpus_stats(corpus);
    std::cout << dist.word_counts.size() << " texts, median " << format_double(dist.median) << " words\n";
    write_output(config.out / "length_hist.tsv", format_histogram_tsv(dist));
    write_output(config.out / "length_cdf.tsv", format_cdf_tsv(dist));
    return 0;
}

int cmd_summarize(const Options& opts)
{
    auto config = resolve(opts);
    config.summary.validate();
    auto corpus = open_corpus(config);
    auto abbr = abbreviations(config);
    auto summaries = summarize_corpus(corpus, config.summary, std::max<std::size_t>(1, config.threads), abbr);
    const auto dir = summaries_dir(config);
    save_summaries(summaries, config.summary, dir);
    std::cout << summaries.documents.size() << " document summaries, " << summaries.queries.size()
              << " query summaries\n";
    std::cout << "wrote " << (dir / "summaries.tsv").string() << "\n";
    std::cout << "wrote " << (dir / "query_summaries.tsv").string() << "\n";
    return 0;
}

int cmd_index(const Options& opts)
{
    auto config = resolve(opts);
    const auto field = parse_index_field(opts.mode.empty() ? "full_text" : opts.mode);
    auto corpus = open_corpus(config);
    auto texts = field == IndexField::summary ? open_summaries(config).documents : document_texts(corpus);
    auto index = InvertedIndex::build(texts, field);
    const auto path = config.out / ("index_" + to_string(field) + ".idx");
    index.save(path);
    std::cout << index.doc_count() << " docs, " << index.postings().size() << " terms, avgdl "
              << format_double(index.avgdl()) << "\n";
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_score(const Options& opts)
{
    auto config = resolve(opts);
    config.bm25.validate();
    auto corpus = open_corpus(config);
    PoolScoringOptions scoring{config.bm25, config.max_query_tokens};

    Run run;
    const auto& mode = opts.mode;
    if (mode == "bm25_full" || mode == "bm25_summary") {
        const bool summary = mode == "bm25_summary";
        const auto tag = summary ? std::string("BM25_SUMMARIES") : std::string("BM25");
        std::optional<SummarySet> summaries;
        if (summary) {
            summaries = open_summaries(config);
        }
        if (!opts.index.empty()) {
            require_exists(opts.index, "index file");
            auto index = InvertedIndex::load(opts.index);
            if (index.field() != (summary ? IndexField::summary : IndexField::full_text)) {
                throw Error("index " + opts.index + " was built over " + to_string(index.field()) +
                            " text, not what mode " + mode + " scores");
            }
            run = bm25_run(corpus, index, summary ? summaries->queries : query_texts(corpus), scoring, tag);
        } else {
            run = summary ? bm25_summary_run(corpus, *summaries, scoring, tag) : bm25_full_run(corpus, scoring, tag);
        }
    } else if (mode == "external") {
        require_exists(opts.scores, "score file");
        run = rank_candidates(load_external_scores(opts.scores, corpus), corpus.queries, "EXTERNAL");
    } else if (mode == "perfect") {
        run = perfect_ranking(corpus);
    } else if (mode == "random") {
        run = random_run(corpus, config.split.rng_seed);
    } else {
        throw Error("unknown score mode '" + mode + "' (bm25_full, bm25_summary, external, perfect, random)");
    }
    const auto path = config.out / ("run_" + mode + ".txt");
    write_trec_run(run, path);
    std::cout << run.rankings.size() << " queries ranked (" << run.tag << ")\n";
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_eval(const Options& opts)
{
    auto config = resolve(opts);
    require_exists(opts.run, "run file");
    auto corpus = open_corpus(config);
    const auto& qrels = require_qrels(corpus);
    auto run = read_trec_run(opts.run);
    auto metrics = evaluate_run(run, qrels, config.ks);
    for (const auto& name : metrics.metric_names()) {
        std::cout << name << "\t" << format_double(metrics.macro.at(name)) << "\n";
    }
    write_output(config.out / "metrics.tsv", format_metrics_tsv(metrics));
    write_output(config.out / "pr_curve.tsv", format_pr_curve_tsv(pr_curve(run, qrels)));
    return 0;
}

int cmd_compare(const Options& opts)
{
    auto config = resolve(opts);
    require_exists(opts.run_a, "baseline run file");
    require_exists(opts.run_b, "treatment run file");
    auto corpus = open_corpus(config);
    const auto& qrels = require_qrels(corpus);
    const auto metric = canonical_metric_name(opts.metric);
    auto result = compare_runs(read_trec_run(opts.run_a), read_trec_run(opts.run_b), qrels, metric);
    const auto text = format_comparison_tsv(metric, result);
    std::cout << text;
    write_output(config.out / "compare.tsv", text);
    return 0;
}

int cmd_export_pairs(const Options& opts)
{
    auto config = resolve(opts);
    auto corpus = open_corpus(config);
    auto summaries = open_summaries(config);
    auto records = build_pair_records(corpus, summaries.queries, summaries.documents);
    std::size_t truncated = 0;
    for (const auto& r : records) {
        truncated += r.input.truncated ? 1 : 0;
    }
    std::cout << records.size() << " pairs, " << truncated << " truncated\n";
    write_output(config.out / "pairs.tsv", format_pairs_tsv(records));
    return 0;
}

void add_config_options(CLI::App* cmd, Options& opts)
{
    cmd->add_option("--config", opts.config_file, "key = value config file; flags override it");
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(
            name, [&opts, key](const std::string& value) { opts.overrides[key] = value; }, help);
    };
    flag("--out", "out", "output directory (default: out)");
    flag("--corpus", "corpus", "corpus directory (default: OUT/corpus)");
    flag("--summaries", "summaries", "summary cache directory (default: OUT)");
    flag("--qrels", "qrels", "qrels file");
    flag("--seed", "seed", "random seed for split and random runs");
    flag("--budget", "budget", "summary word budget");
    flag("--k1", "k1", "BM25 k1");
    flag("--b", "b", "BM25 b");
    flag("--ks", "ks", "metric cutoffs, e.g. 1,5,10,30");
    flag("--threads", "threads", "worker threads");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Legal case and statute retrieval experiments"};
    app.require_subcommand(1);
    Options opts;

    auto* ingest = app.add_subcommand("ingest", "validate and persist a corpus");
    add_config_options(ingest, opts);
    ingest->add_option_function<std::string>(
        "--task", [&opts](const std::string& v) { opts.overrides["task"] = v; }, "case_law or statute");
    ingest->add_option_function<std::string>(
        "--input", [&opts](const std::string& v) { opts.overrides["input"] = v; }, "case-law root directory");
    ingest->add_option_function<std::string>(
        "--articles", [&opts](const std::string& v) { opts.overrides["articles"] = v; }, "statute articles TSV");
    ingest->add_option_function<std::string>(
        "--queries", [&opts](const std::string& v) { opts.overrides["queries"] = v; }, "statute queries TSV");
    ingest->add_option("--pool-size", opts.pool_size, "required candidates per case-law query");
    ingest->add_flag("--split", opts.split, "also write OUT/train and OUT/eval");

    auto* stats = app.add_subcommand("stats", "text length distribution");
    add_config_options(stats, opts);

    auto* summarize = app.add_subcommand("summarize", "summarize every document and query");
    add_config_options(summarize, opts);

    auto* index = app.add_subcommand("index", "build and persist a BM25 index");
    add_config_options(index, opts);
    index->add_option("--mode", opts.mode, "full_text or summary")->check(CLI::IsMember({"full_text", "summary"}));

    auto* score = app.add_subcommand("score", "score every pool and write a TREC run");
    add_config_options(score, opts);
    score->add_option("--mode", opts.mode, "bm25_full, bm25_summary, external, perfect or random")
        ->required()
        ->check(CLI::IsMember({"bm25_full", "bm25_summary", "external", "perfect", "random"}));
    score->add_option("--scores", opts.scores, "external score TSV (mode external)");
    score->add_option("--index", opts.index, "persisted index to score with");

    auto* eval = app.add_subcommand("eval", "evaluate a run");
    add_config_options(eval, opts);
    eval->add_option("--run", opts.run, "TREC run file")->required();

    auto* compare = app.add_subcommand("compare", "significance test between two runs");
    add_config_options(compare, opts);
    compare->add_option("--run-a", opts.run_a, "baseline run")->required();
    compare->add_option("--run-b", opts.run_b, "treatment run")->required();
    compare->add_option("--metric", opts.metric, "map, Rprec, P_k or recall_k (aliases MAP, P@R, P@k, R@k)");

    auto* export_pairs = app.add_subcommand("export-pairs", "write summary pairs for an external trainer");
    add_config_options(export_pairs, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            return cmd_ingest(opts);
        }
        if (stats->parsed()) {
            return cmd_stats(opts);
        }
        if (summarize->parsed()) {
            return cmd_summarize(opts);
        }
        if (index->parsed()) {
            return cmd_index(opts);
        }
        if (score->parsed()) {
            return cmd_score(opts);
        }
        if (eval->parsed()) {
            return cmd_eval(opts);
        }
        if (compare->parsed()) {
            return cmd_compare(opts);
        }
        return cmd_export_pairs(opts);
    } catch (const std::exception& e) {
        std::cerr << "legalsearch: error: " << e.what() << "\n";
        return 1;
    }
}
