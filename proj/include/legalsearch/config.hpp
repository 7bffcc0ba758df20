#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "legalsearch/bm25.hpp"
#include "legalsearch/corpus.hpp"
#include "legalsearch/summarize.hpp"

namespace legalsearch {

/// Settings shared by the pipeline commands. File form is flat
/// `key = value` lines with '#' comments; unknown keys are rejected.
struct PipelineConfig {
    TaskKind task_kind = TaskKind::case_law;
    std::filesystem::path corpus;  // persisted corpus directory
    std::filesystem::path input;   // case-law root for ingest
    std::filesystem::path articles;
    std::filesystem::path queries;
    std::filesystem::path qrels;
    std::filesystem::path summaries;
    std::filesystem::path abbreviations;
    SummaryConfig summary;
    Bm25Params bm25;
    std::size_t max_query_tokens = 0;
    SplitSpec split;
    std::vector<std::size_t> ks{1, 5, 10, 30};
    std::filesystem::path out = "out";
    std::size_t threads = 1;

    std::string to_text() const;
    static PipelineConfig parse(const std::string& text, const std::string& source = "<config>");
    static PipelineConfig load(const std::filesystem::path& path);

    /// Applies one `key`/`value` setting; throws on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    bool operator==(const PipelineConfig& other) const { return to_text() == other.to_text(); }
};

std::vector<std::size_t> parse_cutoffs(const std::string& text);

}  // namespace legalsearch
