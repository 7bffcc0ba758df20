#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace legalsearch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the offending location.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// Text fields in TSV files escape backslash, TAB, LF and CR as \\ \t \n \r.
std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits on runs of spaces/tabs, as trec_eval does.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// Reads a file into memory; throws Error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes a file atomically enough for a batch tool (truncate + write).
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Splits into lines on LF, stripping a trailing CR. The final empty line
/// after a terminating LF is not reported.
std::vector<std::string_view> lines_of(std::string_view contents);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Strict double parse (whole field must be consumed). Accepts inf/nan
/// spellings so callers can reject them with a precise message.
bool parse_double(std::string_view field, double& out);

bool parse_size(std::string_view field, std::size_t& out);

}  // namespace legalsearch
