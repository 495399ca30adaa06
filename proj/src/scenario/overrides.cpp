#include "voltaic/scenario/overrides.hpp"

#include "voltaic/common/error.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <set>

namespace voltaic {

namespace {

// Every tuple matching the domain pattern. Set-name entries must name the
// dim's own set; "n" ranges over the active nodes only.
std::vector<Tuple> fan_out(const SymbolRef& ref, const std::vector<std::string>& dims, const SystemData& data,
                           const ModelConfig& config, const std::vector<std::string>& active)
{
    if (ref.domain.size() != dims.size()) {
        throw ValidationError(fmt::format("'{}' expects {} index(es) ({}), got {}", render(ref), dims.size(),
                                          join(dims, ","), ref.domain.size()));
    }
    std::vector<Tuple> out{Tuple{}};
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const auto& entry = ref.domain[k];
        auto elements = dims[k] == "n" ? active : set_elements(data, config, dims[k]);
        std::vector<std::string> picks;
        if (entry.literal) {
            auto all = set_elements(data, config, dims[k]);
            if (std::find(all.begin(), all.end(), entry.text) == all.end()) {
                throw ValidationError(fmt::format("'{}': element '{}' is not in set {}", render(ref), entry.text,
                                                  dims[k]));
            }
            picks.push_back(entry.text);
        } else {
            if (entry.text != dims[k]) {
                throw ValidationError(fmt::format("'{}': position {} ranges over set {}, not '{}'", render(ref),
                                                  k + 1, dims[k], entry.text));
            }
            picks = elements;
        }
        std::vector<Tuple> next;
        for (const auto& prefix : out) {
            for (const auto& p : picks) {
                Tuple t = prefix;
                t.push_back(p);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

bool all_literal(const SymbolRef& ref)
{
    return std::all_of(ref.domain.begin(), ref.domain.end(), [](const DomainEntry& e) { return e.literal; });
}

} // namespace

EffectiveInputs apply_overrides(const ScenarioSpec& spec, const ScenarioBase& base)
{
    EffectiveInputs in{base.data, base.config, base.choices, {}, {}};
    if (spec.country_set) {
        for (const auto& n : *spec.country_set) {
            if (!base.data.find_node(n)) {
                throw ValidationError(fmt::format("run {}: country_set names unknown node '{}'", spec.run_id, n));
            }
            if (std::find(in.active_nodes.begin(), in.active_nodes.end(), n) == in.active_nodes.end()) {
                in.active_nodes.push_back(n);
            }
        }
        if (in.active_nodes.empty()) {
            throw ValidationError(fmt::format("run {}: empty country_set", spec.run_id));
        }
    } else {
        in.active_nodes = base.data.node_ids();
    }
    for (const auto& [block, choice] : spec.constraint_choices) {
        set_constraint_choice(in.choices, block, choice);
    }

    std::set<std::pair<std::string, Tuple>> seen;
    for (const auto& o : spec.overrides) {
        if (o.ref.kind != TargetKind::parameter && o.ref.kind != TargetKind::timeseries) {
            continue;
        }
        const auto* info = find_parameter(o.ref.name);
        if (!info) {
            throw ValidationError(fmt::format("run {}: unknown parameter '{}'", spec.run_id, o.ref.name));
        }
        auto tuples = fan_out(o.ref, info->dims, in.data, in.config, in.active_nodes);
        const bool strict = all_literal(o.ref);
        for (const auto& t : tuples) {
            if (!parameter_exists(in.data, info->name, t)) {
                if (strict) {
                    throw ValidationError(fmt::format("run {}: '{}' has no record ({})", spec.run_id,
                                                      render(o.ref), join(t, ",")));
                }
                continue;
            }
            if (info->is_series) {
                set_series_reference(in.data, info->name, t, o.text);
                const auto& s = in.data.series_named(o.text);
                if (s.values.size() != static_cast<std::size_t>(in.config.end_hour)) {
                    throw ValidationError(fmt::format("run {}: series '{}' has {} values, expected {}", spec.run_id,
                                                      o.text, s.values.size(), in.config.end_hour));
                }
            } else {
                set_parameter(in.data, in.config, info->name, t, o.number);
            }
            if (seen.insert({info->name, t}).second) {
                in.touched.emplace_back(info->name, t);
            }
        }
    }
    try {
        validate_system(in.data, in.config);
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("run {}: overrides leave invalid data: {}", spec.run_id, e.what()));
    }
    return in;
}

std::vector<LpUpdate> variable_updates(const ScenarioSpec& spec, const LinearProgram& lp,
                                       const EffectiveInputs& inputs)
{
    std::vector<LpUpdate> out;
    for (const auto& o : spec.overrides) {
        auto kind = o.ref.kind;
        if (kind != TargetKind::variable_fix && kind != TargetKind::variable_lo && kind != TargetKind::variable_up) {
            continue;
        }
        const auto* info = lp.symbol(o.ref.name);
        if (!info || info->cls != SymbolClass::variable) {
            throw ValidationError(fmt::format("run {}: '{}' is not a model variable", spec.run_id, o.ref.name));
        }
        auto tuples = fan_out(o.ref, info->dims, inputs.data, inputs.config, inputs.active_nodes);
        const bool strict = all_literal(o.ref);
        for (const auto& t : tuples) {
            auto j = lp.find_column(o.ref.name, t);
            if (!j) {
                if (strict) {
                    throw ValidationError(fmt::format("run {}: no column {}", spec.run_id,
                                                      LinearProgram::key(o.ref.name, t)));
                }
                continue;
            }
            if (kind != TargetKind::variable_up) {
                out.push_back(LpUpdate::lower(*j, o.number));
            }
            if (kind != TargetKind::variable_lo) {
                out.push_back(LpUpdate::upper(*j, o.number));
            }
        }
    }
    return out;
}

ExpandedScenario expand_overrides(const ScenarioSpec& spec, const LinearProgram& lp, const ScenarioBase& base)
{
    ExpandedScenario out;
    out.inputs = apply_overrides(spec, base);
    auto& in = out.inputs;
    auto& deltas = out.deltas;
    for (const auto& [name, tuple] : in.touched) {
        auto u = parameter_updates(lp, in.data, in.config, in.choices, name, tuple);
        deltas.insert(deltas.end(), u.begin(), u.end());
    }
    const auto& c0 = base.choices;
    const auto& c1 = in.choices;
    if (c0.renewable_share != c1.renewable_share || c0.co2_cap != c1.co2_cap ||
        c0.ntc_expansion != c1.ntc_expansion) {
        auto u = choice_updates(lp, in.data, in.config, in.choices);
        deltas.insert(deltas.end(), u.begin(), u.end());
    }
    auto v = variable_updates(spec, lp, in);
    deltas.insert(deltas.end(), v.begin(), v.end());
    if (in.active_nodes.size() != base.data.nodes.size()) {
        auto ex = exclusion_updates(lp, in.data, in.active_nodes);
        deltas.insert(deltas.end(), ex.updates.begin(), ex.updates.end());
        out.excluded_columns = std::move(ex.columns);
        out.excluded_rows = std::move(ex.rows);
    }
    return out;
}

} // namespace voltaic
