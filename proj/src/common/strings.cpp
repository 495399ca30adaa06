#include "voltaic/common/strings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace voltaic {

std::string trim(std::string_view s)
{
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) {
        return {};
    }
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string to_lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::optional<double> parse_number(std::string_view s)
{
    auto t = trim(s);
    if (t.empty()) {
        return std::nullopt;
    }
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<bool> parse_yes_no(std::string_view s)
{
    auto t = to_lower(trim(s));
    if (t == "yes" || t == "true" || t == "1" || t == "y") {
        return true;
    }
    if (t == "no" || t == "false" || t == "0" || t == "n") {
        return false;
    }
    return std::nullopt;
}

std::string format_exact(double v)
{
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_significant(double v, int digits)
{
    if (v == 0.0 || std::abs(v) < 1e-300) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    std::string out(buf);
    if (out == "-0") {
        return "0";
    }
    return out;
}

std::string join(const Tuple& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out.append(sep);
        }
        out.append(parts[i]);
    }
    return out;
}

std::string hour_label(std::size_t one_based)
{
    return "h" + std::to_string(one_based);
}

} // namespace voltaic
