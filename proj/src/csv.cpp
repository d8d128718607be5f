#include "tedm/csv.hpp"

#include "tedm/error.hpp"

#include <fstream>
#include <sstream>

namespace tedm::csv {

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::string_view::npos;
}

namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return c != ' ' && c != '\t' && c != '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && !not_space(s[b])) ++b;
    while (e > b && !not_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

}  // namespace

Table parse(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    Table table;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_quoted = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    auto finish_cell = [&] {
        row.push_back(cell_quoted ? cell : trim(cell));
        cell.clear();
        cell_quoted = false;
    };
    auto finish_row = [&] {
        finish_cell();
        bool blank = row.size() == 1 && row[0].empty();
        if (!blank) {
            if (table.header.empty()) {
                table.header = std::move(row);
            } else {
                if (row.size() != table.header.size())
                    throw Error(ErrorCode::SchemaError,
                                "expected " + std::to_string(table.header.size()) + " columns, found " +
                                    std::to_string(row.size()),
                                "line " + std::to_string(row_line));
                table.rows.push_back(std::move(row));
                table.line_numbers.push_back(row_line);
            }
        }
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (cell_quoted || !trim(cell).empty())
                    throw Error(ErrorCode::SchemaError, "stray quote inside a cell", "line " + std::to_string(line));
                cell.clear();
                in_quotes = true;
                cell_quoted = true;
                break;
            case ',':
                finish_cell();
                break;
            case '\n':
                finish_row();
                ++line;
                row_line = line;
                break;
            default:
                if (cell_quoted) {
                    if (c == ' ' || c == '\t' || c == '\r') break;
                    throw Error(ErrorCode::SchemaError, "text after a closing quote", "line " + std::to_string(line));
                }
                cell += c;
        }
    }
    if (in_quotes) throw Error(ErrorCode::SchemaError, "unterminated quoted cell", "line " + std::to_string(row_line));
    if (!cell.empty() || !row.empty()) finish_row();
    if (table.header.empty()) throw Error(ErrorCode::SchemaError, "empty CSV document");
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string escape_cell(std::string_view cell) {
    if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace tedm::csv
