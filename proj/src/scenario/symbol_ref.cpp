#include "voltaic/scenario/symbol_ref.hpp"

#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"

#include <cctype>
#include <fmt/core.h>

namespace voltaic {

std::string to_string(TargetKind kind)
{
    switch (kind) {
    case TargetKind::parameter:
        return "parameter";
    case TargetKind::timeseries:
        return "timeseries";
    case TargetKind::variable_fix:
        return "variable_fix";
    case TargetKind::variable_lo:
        return "variable_lo";
    case TargetKind::variable_up:
        return "variable_up";
    case TargetKind::constraint_choice:
        return "constraint_choice";
    case TargetKind::country_set:
        break;
    }
    return "country_set";
}

namespace {

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void fail(std::string_view text, const std::string& why)
{
    throw ValidationError(fmt::format("malformed symbol reference '{}': {}", text, why));
}

} // namespace

SymbolRef parse_symbol_ref(std::string_view raw)
{
    std::string text = trim(raw);
    SymbolRef ref;
    std::size_t i = 0;
    while (i < text.size() && name_char(text[i])) {
        ++i;
    }
    ref.name = text.substr(0, i);
    if (ref.name.empty() || std::isdigit(static_cast<unsigned char>(ref.name[0]))) {
        fail(raw, "missing or invalid name");
    }

    auto parse_attribute = [&]() {
        // i points at '.'
        std::size_t j = i + 1;
        while (j < text.size() && name_char(text[j])) {
            ++j;
        }
        auto attr = to_lower(text.substr(i + 1, j - i - 1));
        if (attr == "fx") {
            ref.kind = TargetKind::variable_fix;
        } else if (attr == "lo") {
            ref.kind = TargetKind::variable_lo;
        } else if (attr == "up") {
            ref.kind = TargetKind::variable_up;
        } else {
            fail(raw, fmt::format("unknown attribute '.{}' (expected .fx, .lo or .up)", attr));
        }
        i = j;
    };

    bool has_attr = false;
    if (i < text.size() && text[i] == '.') {
        parse_attribute();
        has_attr = true;
    }
    if (i < text.size() && text[i] == '(') {
        ref.has_parens = true;
        ++i;
        std::string entry;
        bool literal = false;
        bool closed = false;
        auto push_entry = [&]() {
            std::string t = literal ? entry : trim(entry);
            if (t.empty()) {
                fail(raw, "empty domain entry");
            }
            if (!literal) {
                for (char c : t) {
                    if (!name_char(c)) {
                        fail(raw, fmt::format("set name '{}' must be quoted to be used as an element", t));
                    }
                }
            }
            ref.domain.push_back({t, literal});
            entry.clear();
            literal = false;
        };
        while (i < text.size()) {
            char c = text[i];
            if (c == '\'' || c == '"') {
                if (!trim(entry).empty() || literal) {
                    fail(raw, "quote inside a domain entry");
                }
                auto end = text.find(c, i + 1);
                if (end == std::string::npos) {
                    fail(raw, "unbalanced quote");
                }
                entry = text.substr(i + 1, end - i - 1);
                literal = true;
                i = end + 1;
                while (i < text.size() && text[i] == ' ') {
                    ++i;
                }
                if (i < text.size() && text[i] != ',' && text[i] != ')') {
                    fail(raw, "text after a quoted element");
                }
                continue;
            }
            if (c == '(') {
                fail(raw, "nested parenthesis");
            }
            if (c == ',') {
                push_entry();
            } else if (c == ')') {
                if (!(ref.domain.empty() && trim(entry).empty() && !literal)) {
                    push_entry();
                }
                closed = true;
                ++i;
                break;
            } else {
                entry += c;
            }
            ++i;
        }
        if (!closed) {
            fail(raw, "unbalanced parenthesis");
        }
    }
    if (!has_attr && i < text.size() && text[i] == '.') {
        parse_attribute();
    }
    if (i != text.size()) {
        fail(raw, fmt::format("unexpected text '{}'", text.substr(i)));
    }
    if (ref.kind == TargetKind::parameter && ref.name == "country_set" && ref.domain.empty()) {
        ref.kind = TargetKind::country_set;
    }
    return ref;
}

std::string render(const SymbolRef& ref)
{
    std::string out = ref.name;
    switch (ref.kind) {
    case TargetKind::variable_fix:
        out += ".fx";
        break;
    case TargetKind::variable_lo:
        out += ".lo";
        break;
    case TargetKind::variable_up:
        out += ".up";
        break;
    default:
        break;
    }
    if (ref.has_parens || !ref.domain.empty()) {
        out += '(';
        for (std::size_t k = 0; k < ref.domain.size(); ++k) {
            if (k) {
                out += ',';
            }
            const auto& e = ref.domain[k];
            out += e.literal ? "'" + e.text + "'" : e.text;
        }
        out += ')';
    }
    return out;
}

} // namespace voltaic
