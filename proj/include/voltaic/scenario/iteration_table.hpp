#pragma once

#include "voltaic/scenario/symbol_ref.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voltaic {

/// One cell of a scenario row. `number` is set for parameter and variable
/// targets; `text` holds series names, constraint choices and node lists.
struct Override {
    SymbolRef ref;
    std::string text;
    double number = 0.0;
};

struct ScenarioSpec {
    std::string run_id;
    std::vector<Override> overrides; // parameters, series and variable bounds
    std::optional<std::vector<std::string>> country_set;
    std::vector<std::pair<std::string, std::string>> constraint_choices;
};

/// Parses iteration_table.csv. The first column holds run ids; every
/// other heading is a symbol reference, a constraint block name or
/// "country_set" (nodes separated by ';' or spaces). An empty cell leaves
/// that target at its base value for the run.
///
/// Throws ValidationError for malformed headings, duplicate run ids,
/// unknown constraint choices, or a non-numeric value in a numeric column,
/// naming the row and column.
std::vector<ScenarioSpec> parse_iteration_table(std::string_view csv_text);

} // namespace voltaic
