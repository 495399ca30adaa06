#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voltaic {

using Tuple = std::vector<std::string>;

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Plain decimal parse ("1.5", "-3e2"); no locale, no trailing garbage.
std::optional<double> parse_number(std::string_view s);

/// Case-insensitive yes/no/true/false/1/0.
std::optional<bool> parse_yes_no(std::string_view s);

/// Shortest round-trip text for a double; -0 is written as 0.
std::string format_exact(double v);

/// Fixed number of significant digits, used for human-facing reports.
std::string format_significant(double v, int digits = 6);

std::string join(const Tuple& parts, std::string_view sep);

/// "h1".."hN" hour labels.
std::string hour_label(std::size_t one_based);

} // namespace voltaic
