#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace legalsearch {

/// One sentence located in a source text by byte offsets [start, end).
struct SentenceSpan {
    std::size_t index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string text;

    bool operator==(const SentenceSpan&) const = default;
};

struct TokenizedText {
    std::vector<std::string> tokens;
    std::size_t word_count = 0;

    bool operator==(const TokenizedText&) const = default;
};

/// Words ending in '.' that never terminate a sentence ("v.", "No.", "s.").
/// Matching is case-insensitive.
class AbbreviationList {
public:
    /// The built-in list, tuned for common-law citations.
    static const AbbreviationList& builtin();

    /// One abbreviation per line, trailing period included; '#' starts a
    /// comment line.
    static AbbreviationList load(const std::filesystem::path& path);

    AbbreviationList() = default;
    explicit AbbreviationList(const std::vector<std::string>& entries);

    bool contains(std::string_view word) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::set<std::string, std::less<>>& entries() const noexcept { return entries_; }

private:
    std::set<std::string, std::less<>> entries_;
};

/// Rule-based segmentation: a sentence ends at '.', '!' or '?' (plus any
/// closing quotes/brackets) followed by whitespace and an uppercase letter
/// or digit, unless the word carrying the period is a listed abbreviation.
std::vector<SentenceSpan> split_sentences(std::string_view text,
                                          const AbbreviationList& abbreviations = AbbreviationList::builtin());

/// Lowercased maximal runs of Unicode letters/digits; everything else is a
/// separator.
TokenizedText tokenize_words(std::string_view text);

std::size_t count_words(std::string_view text);

/// WordPiece length estimate: each word is taken to expand to two subwords.
inline constexpr std::size_t kSubwordsPerWord = 2;

constexpr std::size_t estimate_subword_count(std::size_t word_count) noexcept
{
    return kSubwordsPerWord * word_count;
}

}  // namespace legalsearch
