#include "voltaic/io/extract.hpp"

#include "voltaic/common/parallel.hpp"
#include "voltaic/io/store.hpp"
#include "voltaic/model/parameters.hpp"

#include <cmath>
#include <fmt/core.h>
#include <set>

namespace voltaic {

namespace {

bool at_active_node(const std::vector<std::string>& dims, const Tuple& key, const std::set<std::string>& active)
{
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (dims[d] == "n" && !active.count(key[d])) {
            return false;
        }
    }
    return true;
}

bool line_active(const SystemData& data, const std::string& id, const std::set<std::string>& active)
{
    const Line* l = data.find_line(id);
    return l && active.count(l->from_node) && active.count(l->to_node);
}

// Every tuple over the given sets, in set order.
std::vector<Tuple> cartesian(const std::vector<std::vector<std::string>>& sets)
{
    std::vector<Tuple> out{Tuple{}};
    for (const auto& set : sets) {
        std::vector<Tuple> next;
        for (const auto& prefix : out) {
            for (const auto& e : set) {
                auto t = prefix;
                t.push_back(e);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

Symbol parameter_symbol(const ParameterInfo& info, const EffectiveInputs& in)
{
    Symbol s;
    s.name = info.name;
    s.kind = ValueKind::parameter;
    s.unit = info.unit;
    s.dims = info.dims;
    std::vector<std::vector<std::string>> sets;
    for (const auto& d : info.dims) {
        sets.push_back(d == "n" ? in.active_nodes : set_elements(in.data, in.config, d));
    }
    std::set<std::string> active(in.active_nodes.begin(), in.active_nodes.end());
    if (info.is_series) {
        s.dims.push_back("h");
    }
    for (const auto& t : cartesian(sets)) {
        if (!parameter_exists(in.data, info.name, t)) {
            continue;
        }
        if (!info.dims.empty() && info.dims[0] == "l" && !line_active(in.data, t[0], active)) {
            continue;
        }
        if (!info.is_series) {
            if (info.name == "co2_cap" && !in.data.find_node(t[0])->co2_cap) {
                continue;
            }
            s.set(t, get_parameter(in.data, in.config, info.name, t));
            continue;
        }
        std::string series;
        if (info.name == "d") {
            series = in.data.find_node(t[0])->demand_series;
        } else if (const auto* tech = in.data.find_technology(t[1], t[0])) {
            series = tech->availability_series;
        }
        if (series.empty()) {
            continue;
        }
        const auto& values = in.data.series_named(series).values;
        for (int h = 0; h < in.config.end_hour && h < static_cast<int>(values.size()); ++h) {
            auto key = t;
            key.push_back(hour_label(static_cast<std::size_t>(h) + 1));
            s.set(key, values[h]);
        }
    }
    return s;
}

Symbol lp_symbol(const std::string& name, ValueKind kind, const RunResult& r, const SymbolInfo& info,
                 const std::set<int>& excluded_cols, const std::set<int>& excluded_rows,
                 const std::vector<double>& activity)
{
    const LinearProgram& lp = *r.program;
    const auto& data = r.inputs.data;
    std::set<std::string> active(r.inputs.active_nodes.begin(), r.inputs.active_nodes.end());
    Symbol s;
    s.name = name;
    s.kind = kind;
    s.dims = info.dims;
    if (info.cls == SymbolClass::variable) {
        s.unit = kind == ValueKind::marginal ? "EUR/" + info.unit : info.unit;
        for (int c : lp.columns_of(name)) {
            const auto& col = lp.columns()[c];
            if (excluded_cols.count(c) || !at_active_node(info.dims, col.domain, active) ||
                (info.dims[0] == "l" && !line_active(data, col.domain[0], active))) {
                continue;
            }
            s.set(col.domain, kind == ValueKind::marginal ? r.solution.reduced_cost[c] : r.solution.primal[c]);
        }
    } else {
        // equation units describe the dual; activities carry none
        s.unit = kind == ValueKind::marginal ? info.unit : std::string{};
        for (int i : lp.rows_of(name)) {
            const auto& row = lp.rows()[i];
            if (excluded_rows.count(i) || !at_active_node(info.dims, row.domain, active) ||
                (info.dims[0] == "l" && !line_active(data, row.domain[0], active))) {
                continue;
            }
            // infinite rhs marks a switched-off policy row
            if (std::isinf(row.rhs)) {
                continue;
            }
            s.set(row.domain, kind == ValueKind::marginal ? r.solution.dual[i] : activity[i]);
        }
    }
    return s;
}

SymbolStore extract_one(const RunResult& r, const std::vector<ReportingEntry>& reporting,
                        std::vector<std::string>& warnings)
{
    SymbolStore store;
    store.run_id = r.run_id;
    store.meta = run_metadata(r);
    const bool solved = r.ok() && r.program;
    std::set<int> excluded_cols(r.excluded_columns.begin(), r.excluded_columns.end());
    std::set<int> excluded_rows(r.excluded_rows.begin(), r.excluded_rows.end());
    std::vector<double> activity;
    if (solved) {
        activity = r.program->row_activity(r.solution.primal);
    }
    for (const auto& entry : reporting) {
        const auto key = store_key(entry.symbol, entry.kind);
        const SymbolInfo* info = r.program ? r.program->symbol(entry.symbol) : nullptr;
        const ParameterInfo* param = find_parameter(entry.symbol);
        if (info && solved) {
            store.symbols[key] = lp_symbol(entry.symbol, entry.kind, r, *info, excluded_cols, excluded_rows, activity);
        } else if (param && !r.inputs.active_nodes.empty()) {
            if (entry.kind == ValueKind::marginal) {
                warnings.push_back(fmt::format("run {}: parameter '{}' has no marginal; stored empty", r.run_id,
                                               entry.symbol));
                store.symbols[key] = Symbol{entry.symbol, entry.kind, param->dims, {}, {}};
            } else {
                store.symbols[entry.symbol] = parameter_symbol(*param, r.inputs);
            }
        } else {
            Symbol empty{entry.symbol, entry.kind, {}, {}, {}};
            if (info) {
                empty.dims = info->dims;
                warnings.push_back(
                    fmt::format("run {}: '{}' stored empty, the run has no solution", r.run_id, entry.symbol));
            } else {
                warnings.push_back(
                    fmt::format("symbol '{}' is not in the model; stored empty", entry.symbol));
            }
            store.symbols[key] = std::move(empty);
        }
    }
    return store;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

} // namespace

std::map<std::string, std::string> run_metadata(const RunResult& r)
{
    std::map<std::string, std::string> m;
    m["status"] = r.status_text();
    if (!r.error.empty()) {
        m["error"] = r.error;
    }
    if (r.ok() && r.program) {
        auto split = objective_breakdown(*r.program, r.solution.primal);
        m["objective"] = format_exact(r.solution.objective);
        m["objective_investment"] = format_exact(split.investment);
        m["objective_variable"] = format_exact(split.variable);
    }
    const auto& cfg = r.inputs.config;
    m["config.end_hour"] = std::to_string(cfg.end_hour);
    m["config.base_year"] = std::to_string(cfg.base_year);
    m["config.dispatch_only"] = yes_no(cfg.dispatch_only);
    m["config.network_transfer"] = yes_no(cfg.network_transfer);
    m["config.infeasibility"] = yes_no(cfg.infeasibility);
    m["choice.renewable_share"] = r.inputs.choices.renewable_share ? "on" : "off";
    m["choice.co2_cap"] = r.inputs.choices.co2_cap ? "on" : "off";
    m["choice.ntc_expansion"] = r.inputs.choices.ntc_expansion ? "on" : "off";
    m["active_nodes"] = join(r.inputs.active_nodes, ";");
    for (const auto& t : r.inputs.data.technologies) {
        m["tech." + t.id + ".kind"] = to_string(t.kind);
    }
    return m;
}

Extraction extract_symbols(const std::vector<RunResult>& results, const std::vector<ReportingEntry>& reporting,
                           std::size_t threads)
{
    Extraction out;
    out.stores.resize(results.size());
    std::vector<std::vector<std::string>> warnings(results.size());
    for_each_index(results.size(), threads,
                   [&](std::size_t i) { out.stores[i] = extract_one(results[i], reporting, warnings[i]); });
    std::set<std::string> seen;
    for (auto& run : warnings) {
        for (auto& w : run) {
            if (seen.insert(w).second) {
                out.warnings.push_back(std::move(w));
            }
        }
    }
    return out;
}

} // namespace voltaic
