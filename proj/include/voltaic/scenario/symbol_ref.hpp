#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace voltaic {

enum class TargetKind { parameter, timeseries, variable_fix, variable_lo, variable_up, constraint_choice, country_set };

std::string to_string(TargetKind kind);

struct DomainEntry {
    std::string text;
    bool literal = false; // 'DE' (element) vs n (set name)

    bool operator==(const DomainEntry&) const = default;
};

/// A scenario-table heading such as c_i_sto_e(n,'Li-ion'), N.fx('gas',n)
/// or slack_penalty. Variable bounds use the .fx/.lo/.up attribute.
struct SymbolRef {
    std::string name;
    std::vector<DomainEntry> domain;
    TargetKind kind = TargetKind::parameter;
    bool has_parens = false; // "x()" and "x" render differently

    bool operator==(const SymbolRef&) const = default;
};

/// Parses the syntax only; the kind is parameter, a variable kind when an
/// attribute is present, or country_set for that heading. Classifying
/// series parameters and constraint blocks is the table parser's job.
/// Throws ValidationError on unbalanced parentheses or quotes, empty
/// domain entries, bad names or trailing text.
SymbolRef parse_symbol_ref(std::string_view text);

/// Canonical text: no spaces, single-quoted literals, attribute after the
/// name. render(parse(s)) == s for canonical s.
std::string render(const SymbolRef& ref);

} // namespace voltaic
