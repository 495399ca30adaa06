#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace voltaic {

using CsvRow = std::vector<std::string>;

/// Comma-separated text with double-quote quoting. Commas nested inside
/// parentheses do not split a field, so headers such as
/// c_i_sto_e(n,'Li-ion') survive unquoted. Blank lines are skipped and
/// every field is trimmed.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);
std::string csv_line(const CsvRow& row);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

} // namespace voltaic
