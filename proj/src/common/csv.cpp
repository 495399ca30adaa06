#include "voltaic/common/csv.hpp"

#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"

#include <fstream>
#include <sstream>

namespace voltaic {

std::vector<CsvRow> parse_csv(std::string_view text)
{
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    int paren_depth = 0;

    auto finish_field = [&] {
        row.push_back(field_quoted ? field : trim(field));
        field.clear();
        field_quoted = false;
        paren_depth = 0;
    };
    auto finish_row = [&] {
        finish_field();
        bool blank = row.size() == 1 && row.front().empty();
        if (!blank) {
            rows.push_back(std::move(row));
        }
        row.clear();
    };

    // Skip a UTF-8 byte-order mark.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (trim(field).empty()) {
                field.clear();
                in_quotes = true;
                field_quoted = true;
            } else {
                field.push_back(c);
            }
            break;
        case '(':
            ++paren_depth;
            field.push_back(c);
            break;
        case ')':
            if (paren_depth > 0) {
                --paren_depth;
            }
            field.push_back(c);
            break;
        case ',':
            if (paren_depth > 0) {
                field.push_back(c);
            } else {
                finish_field();
            }
            break;
        case '\r':
            break;
        case '\n':
            finish_row();
            break;
        default:
            if (!field_quoted) {
                field.push_back(c);
            }
            break;
        }
    }
    if (!field.empty() || !row.empty() || field_quoted) {
        finish_row();
    }
    return rows;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const CsvRow& row)
{
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += csv_escape(row[i]);
    }
    out.push_back('\n');
    return out;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

} // namespace voltaic
