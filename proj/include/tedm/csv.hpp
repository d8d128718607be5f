#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tedm::csv {

struct Table {
    std::vector<std::string> header;
    /// Each row has exactly header.size() cells; line numbers are 1-based.
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    /// Index of a header column, or npos.
    std::size_t column(std::string_view name) const;
};

/// RFC 4180 subset: comma separated, double-quoted cells with "" escapes,
/// LF or CRLF line endings, blank lines skipped, optional UTF-8 BOM.
/// Throws Error{SchemaError} on ragged rows or unterminated quotes.
Table parse(std::string_view text);

/// Reads a whole file; throws Error{IoError}.
std::string read_file(const std::string& path);

std::string escape_cell(std::string_view cell);

}  // namespace tedm::csv
