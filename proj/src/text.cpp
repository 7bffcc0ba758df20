#include "legalsearch/text.hpp"

#include <locale>
#include <optional>

#include "legalsearch/tsv.hpp"

namespace legalsearch {
namespace {

const std::ctype<wchar_t>& unicode_ctype()
{
    static const std::locale loc = [] {
        for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            try {
                return std::locale(name);
            } catch (const std::runtime_error&) {
            }
        }
        return std::locale::classic();
    }();
    return std::use_facet<std::ctype<wchar_t>>(loc);
}

struct Decoded {
    char32_t cp;
    std::size_t length;  // 0 means invalid byte
};

Decoded decode_utf8(std::string_view s, std::size_t i)
{
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        return {b0, 1};
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0, 0};
    }
    if (i + len > s.size()) {
        return {0, 0};
    }
    for (std::size_t k = 1; k < len; ++k) {
        unsigned char b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            return {0, 0};
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Overlong forms and surrogates are invalid.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        return {0, 0};
    }
    return {cp, len};
}

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_word_char(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    return unicode_ctype().is(std::ctype_base::alnum, static_cast<wchar_t>(cp));
}

char32_t to_lower(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
    }
    return static_cast<char32_t>(unicode_ctype().tolower(static_cast<wchar_t>(cp)));
}

bool starts_sentence(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    return unicode_ctype().is(std::ctype_base::upper, static_cast<wchar_t>(cp));
}

bool is_space(unsigned char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Closing quotes/brackets that may trail terminal punctuation.
std::size_t closing_length(std::string_view s, std::size_t i)
{
    char c = s[i];
    if (c == '"' || c == '\'' || c == ')' || c == ']') {
        return 1;
    }
    auto d = decode_utf8(s, i);
    if (d.length > 0 && (d.cp == U'’' || d.cp == U'”' || d.cp == U'»')) {
        return d.length;
    }
    return 0;
}

std::size_t opening_length(std::string_view s, std::size_t i)
{
    char c = s[i];
    if (c == '"' || c == '\'' || c == '(' || c == '[') {
        return 1;
    }
    auto d = decode_utf8(s, i);
    if (d.length > 0 && (d.cp == U'‘' || d.cp == U'“' || d.cp == U'«')) {
        return d.length;
    }
    return 0;
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c + ('a' - 'A'));
        }
    }
    return out;
}

// The whitespace-delimited word ending at `period` (inclusive), with any
// opening punctuation stripped.
std::string_view word_ending_at(std::string_view text, std::size_t period)
{
    std::size_t start = period;
    while (start > 0 && !is_space(static_cast<unsigned char>(text[start - 1]))) {
        --start;
    }
    while (start < period && opening_length(text, start) > 0) {
        start += opening_length(text, start);
    }
    return text.substr(start, period + 1 - start);
}

}  // namespace

const AbbreviationList& AbbreviationList::builtin()
{
    static const AbbreviationList list({
        "v.",     "vs.",   "no.",   "nos.",  "mr.",    "mrs.",  "ms.",   "dr.",   "prof.", "inc.",
        "ltd.",   "co.",   "corp.", "s.",    "ss.",    "art.",  "arts.", "para.", "paras.", "p.",
        "pp.",    "j.",    "jj.",   "j.a.",  "c.j.",   "cf.",   "e.g.",  "i.e.",  "sec.",  "secs.",
        "ch.",    "c.",    "r.",    "rr.",   "reg.",   "regs.", "sch.",  "subs.", "cl.",   "fed.",
        "f.c.",   "s.c.",  "s.c.r.", "u.s.", "st.",    "jr.",   "sr.",   "gen.",  "hon.",  "ex.",
        "fig.",   "vol.",  "ed.",   "eds.",  "approx.", "dept.", "govt.", "al.",  "ont.",  "que.",
        "b.c.",   "alta.", "sask.", "n.s.",  "n.b.",   "nfld.", "l.r.",  "ibid.", "id.",  "supp.",
        "cir.",   "ct.",   "app.",  "div.",  "ltée.",  "ref.",  "mt.",   "viz.",
    });
    return list;
}

AbbreviationList::AbbreviationList(const std::vector<std::string>& entries)
{
    for (const auto& e : entries) {
        if (!e.empty()) {
            entries_.insert(ascii_lower(e));
        }
    }
}

AbbreviationList AbbreviationList::load(const std::filesystem::path& path)
{
    auto contents = read_file(path);
    std::vector<std::string> entries;
    for (auto line : lines_of(contents)) {
        while (!line.empty() && is_space(static_cast<unsigned char>(line.back()))) {
            line.remove_suffix(1);
        }
        while (!line.empty() && is_space(static_cast<unsigned char>(line.front()))) {
            line.remove_prefix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        entries.emplace_back(line);
    }
    return AbbreviationList(entries);
}

bool AbbreviationList::contains(std::string_view word) const
{
    return entries_.find(ascii_lower(word)) != entries_.end();
}

std::vector<SentenceSpan> split_sentences(std::string_view text, const AbbreviationList& abbreviations)
{
    std::vector<SentenceSpan> spans;
    auto emit = [&](std::size_t start, std::size_t end) {
        while (end > start && is_space(static_cast<unsigned char>(text[end - 1]))) {
            --end;
        }
        if (end > start) {
            spans.push_back({spans.size(), start, end, std::string(text.substr(start, end - start))});
        }
    };

    std::size_t pos = 0;
    while (pos < text.size() && is_space(static_cast<unsigned char>(text[pos]))) {
        ++pos;
    }
    std::size_t sentence_start = pos;
    while (pos < text.size()) {
        if (!is_terminal(text[pos])) {
            ++pos;
            continue;
        }
        std::size_t mark = pos;
        std::size_t end = pos + 1;
        while (end < text.size() && is_terminal(text[end])) {
            ++end;
        }
        while (end < text.size()) {
            auto n = closing_length(text, end);
            if (n == 0) {
                break;
            }
            end += n;
        }
        if (end >= text.size() || !is_space(static_cast<unsigned char>(text[end]))) {
            pos = end;
            continue;
        }
        std::size_t next = end;
        while (next < text.size() && is_space(static_cast<unsigned char>(text[next]))) {
            ++next;
        }
        std::size_t probe = next;
        while (probe < text.size()) {
            auto n = opening_length(text, probe);
            if (n == 0) {
                break;
            }
            probe += n;
        }
        bool boundary = false;
        if (probe < text.size()) {
            auto d = decode_utf8(text, probe);
            boundary = d.length > 0 && starts_sentence(d.cp);
        }
        bool single_period = text[mark] == '.' && end > mark && (mark + 1 == text.size() || text[mark + 1] != '.');
        if (boundary && single_period && abbreviations.contains(word_ending_at(text, mark))) {
            boundary = false;
        }
        if (boundary) {
            emit(sentence_start, end);
            sentence_start = next;
        }
        pos = next;
    }
    if (sentence_start < text.size()) {
        emit(sentence_start, text.size());
    }
    return spans;
}

TokenizedText tokenize_words(std::string_view text)
{
    TokenizedText out;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        auto d = decode_utf8(text, i);
        if (d.length == 0) {
            d = {0, 1};
        }
        if (d.cp != 0 && is_word_char(d.cp)) {
            append_utf8(current, to_lower(d.cp));
        } else if (!current.empty()) {
            out.tokens.push_back(std::move(current));
            current.clear();
        }
        i += d.length;
    }
    if (!current.empty()) {
        out.tokens.push_back(std::move(current));
    }
    out.word_count = out.tokens.size();
    return out;
}

std::size_t count_words(std::string_view text)
{
    return tokenize_words(text).word_count;
}

}  // namespace legalsearch
