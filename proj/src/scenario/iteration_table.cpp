#include "voltaic/scenario/iteration_table.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"
#include "voltaic/model/builder.hpp"
#include "voltaic/model/parameters.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <set>

namespace voltaic {

namespace {

bool is_constraint_block(const std::string& name)
{
    const auto& blocks = constraint_blocks();
    return std::any_of(blocks.begin(), blocks.end(), [&](const ConstraintBlock& b) { return b.name == name; });
}

std::vector<std::string> node_list(const std::string& cell)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : cell) {
        if (c == ';' || c == ' ' || c == '|') {
            if (!cur.empty()) {
                out.push_back(cur);
            }
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

// A row like "run, [EUR/MWh], [EUR/MW]" carries units, not a scenario.
bool is_units_row(const CsvRow& row)
{
    if (!row[0].empty() && row[0] != "run") {
        return false;
    }
    bool any = false;
    for (std::size_t c = 1; c < row.size(); ++c) {
        const auto& cell = row[c];
        if (cell.empty()) {
            continue;
        }
        if (cell.size() < 2 || cell.front() != '[' || cell.back() != ']') {
            return false;
        }
        any = true;
    }
    return any;
}

} // namespace

std::vector<ScenarioSpec> parse_iteration_table(std::string_view csv_text)
{
    auto rows = parse_csv(csv_text);
    if (rows.empty()) {
        throw ValidationError("iteration table: missing header row");
    }
    const auto& header = rows[0];
    std::vector<SymbolRef> refs;
    for (std::size_t c = 1; c < header.size(); ++c) {
        SymbolRef ref;
        try {
            ref = parse_symbol_ref(header[c]);
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("iteration table: column {}: {}", c + 1, e.what()));
        }
        if (ref.kind == TargetKind::parameter && ref.domain.empty() && is_constraint_block(ref.name)) {
            ref.kind = TargetKind::constraint_choice;
        } else if (ref.kind == TargetKind::parameter) {
            if (const auto* p = find_parameter(ref.name); p && p->is_series) {
                ref.kind = TargetKind::timeseries;
            }
        }
        refs.push_back(std::move(ref));
    }

    std::vector<ScenarioSpec> specs;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 1 && is_units_row(row)) {
            continue;
        }
        if (row.size() > header.size()) {
            throw ValidationError(fmt::format("iteration table: row {} has {} cells, header has {}", r + 1,
                                              row.size(), header.size()));
        }
        ScenarioSpec spec;
        spec.run_id = row[0];
        if (spec.run_id.empty()) {
            throw ValidationError(fmt::format("iteration table: row {}: empty run id", r + 1));
        }
        if (!seen.insert(spec.run_id).second) {
            throw ValidationError(fmt::format("iteration table: row {}: duplicate run id '{}'", r + 1, spec.run_id));
        }
        for (std::size_t c = 1; c < row.size(); ++c) {
            const std::string& cell = row[c];
            if (cell.empty()) {
                continue;
            }
            const auto& ref = refs[c - 1];
            switch (ref.kind) {
            case TargetKind::country_set:
                spec.country_set = node_list(cell);
                break;
            case TargetKind::constraint_choice: {
                ConstraintChoices probe;
                try {
                    set_constraint_choice(probe, ref.name, cell);
                } catch (const ValidationError& e) {
                    throw ValidationError(fmt::format("iteration table: row {} column '{}': {}", r + 1,
                                                      header[c], e.what()));
                }
                spec.constraint_choices.emplace_back(ref.name, cell);
                break;
            }
            case TargetKind::timeseries:
                spec.overrides.push_back({ref, cell, 0.0});
                break;
            default: {
                auto v = parse_number(cell);
                if (!v) {
                    throw ValidationError(fmt::format("iteration table: row {} column '{}': '{}' is not a number",
                                                      r + 1, header[c], cell));
                }
                spec.overrides.push_back({ref, cell, *v});
                break;
            }
            }
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

} // namespace voltaic
