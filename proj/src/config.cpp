#include "legalsearch/config.hpp"

#include <algorithm>
#include <cmath>

#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::size_t to_size(const std::string& key, const std::string& value)
{
    std::size_t out = 0;
    if (!parse_size(value, out)) {
        throw Error("config key '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return out;
}

double to_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    if (!parse_double(value, out) || !std::isfinite(out)) {
        throw Error("config key '" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

constexpr std::string_view kKeys[] = {
    "task",      "corpus",         "input", "articles", "queries",          "qrels",          "summaries",
    "abbreviations", "budget",     "damping", "tolerance", "max_iterations", "k1",            "b",
    "max_query_tokens", "train_fraction", "seed", "ks",     "out",              "threads"};

}  // namespace

std::vector<std::size_t> parse_cutoffs(const std::string& text)
{
    std::vector<std::size_t> ks;
    for (auto field : split(text, ',')) {
        auto item = trim(field);
        std::size_t k = 0;
        if (!parse_size(item, k) || k == 0) {
            throw Error("invalid cutoff list '" + text + "' (expected e.g. 1,5,10)");
        }
        ks.push_back(k);
    }
    return ks;
}

void PipelineConfig::set(const std::string& key, const std::string& value)
{
    if (key == "task") {
        task_kind = parse_task_kind(value);
    } else if (key == "corpus") {
        corpus = value;
    } else if (key == "input") {
        input = value;
    } else if (key == "articles") {
        articles = value;
    } else if (key == "queries") {
        queries = value;
    } else if (key == "qrels") {
        qrels = value;
    } else if (key == "summaries") {
        summaries = value;
    } else if (key == "abbreviations") {
        abbreviations = value;
    } else if (key == "budget") {
        summary.word_budget = to_size(key, value);
    } else if (key == "damping") {
        summary.damping = to_double(key, value);
    } else if (key == "tolerance") {
        summary.tolerance = to_double(key, value);
    } else if (key == "max_iterations") {
        summary.max_iterations = to_size(key, value);
    } else if (key == "k1") {
        bm25.k1 = to_double(key, value);
    } else if (key == "b") {
        bm25.b = to_double(key, value);
    } else if (key == "max_query_tokens") {
        max_query_tokens = to_size(key, value);
    } else if (key == "train_fraction") {
        split.train_fraction = to_double(key, value);
    } else if (key == "seed") {
        split.rng_seed = to_size(key, value);
    } else if (key == "ks") {
        ks = parse_cutoffs(value);
    } else if (key == "out") {
        out = value;
    } else if (key == "threads") {
        threads = to_size(key, value);
    } else {
        throw Error("unknown config key '" + key + "'");
    }
}

std::string PipelineConfig::to_text() const
{
    std::string ks_text;
    for (auto k : ks) {
        ks_text += (ks_text.empty() ? "" : ",") + std::to_string(k);
    }
    std::string out_text;
    auto line = [&](const std::string& key, const std::string& value) { out_text += key + " = " + value + "\n"; };
    line("task", to_string(task_kind));
    line("corpus", corpus.string());
    line("input", input.string());
    line("articles", articles.string());
    line("queries", queries.string());
    line("qrels", qrels.string());
    line("summaries", summaries.string());
    line("abbreviations", abbreviations.string());
    line("budget", std::to_string(summary.word_budget));
    line("damping", format_double(summary.damping));
    line("tolerance", format_double(summary.tolerance));
    line("max_iterations", std::to_string(summary.max_iterations));
    line("k1", format_double(bm25.k1));
    line("b", format_double(bm25.b));
    line("max_query_tokens", std::to_string(max_query_tokens));
    line("train_fraction", format_double(split.train_fraction));
    line("seed", std::to_string(split.rng_seed));
    line("ks", ks_text);
    line("out", out.string());
    line("threads", std::to_string(threads));
    return out_text;
}

PipelineConfig PipelineConfig::parse(const std::string& text, const std::string& source)
{
    PipelineConfig config;
    std::size_t line_no = 0;
    for (auto raw : lines_of(text)) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source, line_no, "expected 'key = value'");
        }
        auto key = trim(std::string_view(line).substr(0, eq));
        auto value = trim(std::string_view(line).substr(eq + 1));
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            throw ParseError(source, line_no, "unknown config key '" + key + "'");
        }
        // Empty values keep the default, which is how unset paths serialize.
        if (value.empty()) {
            continue;
        }
        try {
            config.set(key, value);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
    return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path)
{
    return parse(read_file(path), path.string());
}

}  // namespace legalsearch
