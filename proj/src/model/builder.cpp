#include "voltaic/model/builder.hpp"

#include "voltaic/common/error.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <numeric>

namespace voltaic {

const std::vector<ConstraintBlock>& constraint_blocks()
{
    static const std::vector<ConstraintBlock> blocks = {
        {"renewable_share", {"on", "off"}, "on"},
        {"co2_cap", {"on", "off"}, "on"},
        {"ntc_expansion", {"on", "off"}, "on"},
    };
    return blocks;
}

void set_constraint_choice(ConstraintChoices& choices, const std::string& block, const std::string& choice)
{
    auto value = to_lower(trim(choice));
    const auto& blocks = constraint_blocks();
    auto it = std::find_if(blocks.begin(), blocks.end(), [&](const ConstraintBlock& b) { return b.name == block; });
    if (it == blocks.end()) {
        throw ValidationError(fmt::format("unknown constraint block '{}'", block));
    }
    if (std::find(it->choices.begin(), it->choices.end(), value) == it->choices.end()) {
        throw ValidationError(fmt::format("constraint block '{}' has no choice '{}'", block, choice));
    }
    bool on = value == "on";
    if (block == "renewable_share") {
        choices.renewable_share = on;
    } else if (block == "co2_cap") {
        choices.co2_cap = on;
    } else {
        choices.ntc_expansion = on;
    }
}

namespace rules {

double capacity_cost(const Technology& t, const ModelConfig& config)
{
    return config.cost_scale() * (t.c_inv_power + t.c_fix);
}

double storage_energy_cost(const StorageTech& s, const ModelConfig& config)
{
    return config.cost_scale() * s.c_i_sto_e;
}

double storage_power_cost(const StorageTech& s, const ModelConfig& config)
{
    return config.cost_scale() * (s.c_i_sto_p + s.c_fix_sto);
}

double ntc_cost(const Line& l, const ModelConfig& config)
{
    return config.cost_scale() * l.c_inv_ntc;
}

namespace {

double fixed_or(const SystemData& data, const std::string& column, const Tuple& domain, double fallback)
{
    auto it = data.fixed_capacities.find({column, domain});
    return it == data.fixed_capacities.end() ? fallback : it->second;
}

} // namespace

std::pair<double, double> capacity_bounds(const SystemData& data, const ModelConfig& config,
                                          const std::string& column, const Tuple& domain)
{
    double lo = 0.0;
    double hi = 0.0;
    if (column == "N") {
        const auto* t = data.find_technology(domain.at(0), domain.at(1));
        if (!t) {
            throw ValidationError(fmt::format("no technology {} at node {}", domain.at(0), domain.at(1)));
        }
        lo = t->cap_min;
        hi = t->cap_max;
    } else if (column == "N_STO_E" || column == "N_STO_P") {
        const auto* s = data.find_storage(domain.at(0), domain.at(1));
        if (!s) {
            throw ValidationError(fmt::format("no storage {} at node {}", domain.at(0), domain.at(1)));
        }
        lo = column == "N_STO_E" ? s->e_min : s->p_min;
        hi = column == "N_STO_E" ? s->e_max : s->p_max;
    } else if (column == "NTC") {
        const auto* l = data.find_line(domain.at(0));
        if (!l) {
            throw ValidationError(fmt::format("no line {}", domain.at(0)));
        }
        lo = l->ntc_existing;
        hi = l->ntc_max;
    } else {
        throw std::logic_error("not a capacity column: " + column);
    }
    if (config.dispatch_only) {
        double v = fixed_or(data, column, domain, lo);
        return {v, v};
    }
    return {lo, hi};
}

double renewable_share_rhs(const SystemData& data, const Node& node, const ConstraintChoices& choices)
{
    if (!choices.renewable_share) {
        return -infinity;
    }
    const auto& d = data.series_named(node.demand_series).values;
    return node.min_renewable_share * std::accumulate(d.begin(), d.end(), 0.0);
}

double co2_rhs(const Node& node, const ConstraintChoices& choices)
{
    if (!choices.co2_cap || !node.co2_cap) {
        return infinity;
    }
    return *node.co2_cap;
}

bool is_directional(const Line& line, const BuildOptions& options)
{
    return line.loss_factor > 0.0 || options.directional_lines.count(line.id) > 0;
}

} // namespace rules

namespace {

struct Scope {
    const SystemData& data;
    const ModelConfig& config;
    const BuildOptions& options;
    LinearProgram& lp;
    std::vector<const Node*> nodes;
    std::vector<const Technology*> techs;
    std::vector<const StorageTech*> storages;
    std::vector<const Line*> lines;
    std::size_t hours = 0;

    std::vector<double> series(const std::string& name) const { return data.series_named(name).values; }
    int col(const char* name, const Tuple& domain) const { return *lp.find_column(name, domain); }
};

void declare_symbols(LinearProgram& lp)
{
    using C = SymbolClass;
    lp.declare_symbol("G", C::variable, {"tech", "n", "h"}, "MWh");
    lp.declare_symbol("CU", C::variable, {"tech", "n", "h"}, "MWh");
    lp.declare_symbol("N", C::variable, {"tech", "n"}, "MW");
    lp.declare_symbol("STO_IN", C::variable, {"sto", "n", "h"}, "MWh");
    lp.declare_symbol("STO_OUT", C::variable, {"sto", "n", "h"}, "MWh");
    lp.declare_symbol("STO_L", C::variable, {"sto", "n", "h"}, "MWh");
    lp.declare_symbol("N_STO_E", C::variable, {"sto", "n"}, "MWh");
    lp.declare_symbol("N_STO_P", C::variable, {"sto", "n"}, "MW");
    lp.declare_symbol("F", C::variable, {"l", "h"}, "MWh");
    lp.declare_symbol("F_REV", C::variable, {"l", "h"}, "MWh");
    lp.declare_symbol("NTC", C::variable, {"l"}, "MW");
    lp.declare_symbol("SLACK", C::variable, {"n", "h"}, "MWh");
    lp.declare_symbol("BAL", C::equation, {"n", "h"}, "EUR/MWh");
    lp.declare_symbol("CAP_DISP", C::equation, {"tech", "n", "h"}, "EUR/MW");
    lp.declare_symbol("CAP_RES", C::equation, {"tech", "n", "h"}, "EUR/MW");
    lp.declare_symbol("STO_BAL", C::equation, {"sto", "n", "h"}, "EUR/MWh");
    lp.declare_symbol("STO_CYCLE", C::equation, {"sto", "n"}, "EUR/MWh");
    lp.declare_symbol("STO_E_CAP", C::equation, {"sto", "n", "h"}, "EUR/MWh");
    lp.declare_symbol("STO_P_IN_CAP", C::equation, {"sto", "n", "h"}, "EUR/MW");
    lp.declare_symbol("STO_P_OUT_CAP", C::equation, {"sto", "n", "h"}, "EUR/MW");
    lp.declare_symbol("FLOW_UP", C::equation, {"l", "h"}, "EUR/MW");
    lp.declare_symbol("FLOW_DN", C::equation, {"l", "h"}, "EUR/MW");
    lp.declare_symbol("RES_SHARE", C::equation, {"n"}, "EUR/MWh");
    lp.declare_symbol("CO2_CAP", C::equation, {"n"}, "EUR/t");
}

void add_columns(Scope& s)
{
    auto& lp = s.lp;
    for (const auto* t : s.techs) {
        lp.add_column("N", {t->id, t->node}, t->cap_min, t->cap_max, 0.0);
    }
    for (const auto* st : s.storages) {
        lp.add_column("N_STO_E", {st->id, st->node}, st->e_min, st->e_max, 0.0);
        lp.add_column("N_STO_P", {st->id, st->node}, st->p_min, st->p_max, 0.0);
    }
    for (const auto* l : s.lines) {
        double hi = s.options.choices.ntc_expansion ? l->ntc_max : l->ntc_existing;
        lp.add_column("NTC", {l->id}, l->ntc_existing, hi, 0.0);
    }
    for (std::size_t h = 1; h <= s.hours; ++h) {
        auto hl = hour_label(h);
        for (const auto* t : s.techs) {
            lp.add_column("G", {t->id, t->node, hl}, 0.0, infinity, 0.0);
            if (t->kind == TechKind::variable_renewable) {
                lp.add_column("CU", {t->id, t->node, hl}, 0.0, infinity, 0.0);
            }
        }
        for (const auto* st : s.storages) {
            lp.add_column("STO_IN", {st->id, st->node, hl}, 0.0, infinity, 0.0);
            lp.add_column("STO_OUT", {st->id, st->node, hl}, 0.0, infinity, 0.0);
            lp.add_column("STO_L", {st->id, st->node, hl}, 0.0, infinity, 0.0);
        }
        for (const auto* l : s.lines) {
            if (rules::is_directional(*l, s.options)) {
                lp.add_column("F", {l->id, hl}, 0.0, infinity, 0.0);
                lp.add_column("F_REV", {l->id, hl}, 0.0, infinity, 0.0);
            } else {
                lp.add_column("F", {l->id, hl}, -infinity, infinity, 0.0);
            }
        }
        if (s.config.infeasibility) {
            for (const auto* n : s.nodes) {
                lp.add_column("SLACK", {n->id, hl}, 0.0, infinity, 0.0);
            }
        }
    }
}

// Hourly nodal balance. Positive F moves energy from_node -> to_node; the
// receiving end sees (1 - loss) of it. Directed lines carry the reverse
// direction in F_REV with the same loss rule.
void emit_energy_balance(Scope& s)
{
    auto& lp = s.lp;
    for (const auto* n : s.nodes) {
        auto demand = s.series(n->demand_series);
        for (std::size_t h = 1; h <= s.hours; ++h) {
            auto hl = hour_label(h);
            int row = lp.add_row("BAL", {n->id, hl}, RowSense::eq, demand[h - 1]);
            for (const auto* t : s.techs) {
                if (t->node == n->id) {
                    lp.add_coefficient(row, s.col("G", {t->id, n->id, hl}), 1.0);
                }
            }
            for (const auto* st : s.storages) {
                if (st->node == n->id) {
                    lp.add_coefficient(row, s.col("STO_OUT", {st->id, n->id, hl}), 1.0);
                    lp.add_coefficient(row, s.col("STO_IN", {st->id, n->id, hl}), -1.0);
                }
            }
            for (const auto* l : s.lines) {
                bool directional = rules::is_directional(*l, s.options);
                if (l->to_node == n->id) {
                    lp.add_coefficient(row, s.col("F", {l->id, hl}), 1.0 - l->loss_factor);
                    if (directional) {
                        lp.add_coefficient(row, s.col("F_REV", {l->id, hl}), -1.0);
                    }
                } else if (l->from_node == n->id) {
                    lp.add_coefficient(row, s.col("F", {l->id, hl}), -1.0);
                    if (directional) {
                        lp.add_coefficient(row, s.col("F_REV", {l->id, hl}), 1.0 - l->loss_factor);
                    }
                }
            }
            if (s.config.infeasibility) {
                lp.add_coefficient(row, s.col("SLACK", {n->id, hl}), 1.0);
            }
        }
    }
}

void emit_capacity_limits(Scope& s)
{
    auto& lp = s.lp;
    for (const auto* t : s.techs) {
        int cap = s.col("N", {t->id, t->node});
        std::vector<double> phi;
        if (t->kind == TechKind::variable_renewable) {
            if (t->availability_series.empty()) {
                throw ValidationError(fmt::format("technology '{}' at node '{}': missing availability series",
                                                  t->id, t->node));
            }
            phi = s.series(t->availability_series);
        }
        for (std::size_t h = 1; h <= s.hours; ++h) {
            auto hl = hour_label(h);
            int g = s.col("G", {t->id, t->node, hl});
            if (t->kind == TechKind::dispatchable) {
                int row = lp.add_row("CAP_DISP", {t->id, t->node, hl}, RowSense::le, 0.0);
                lp.add_coefficient(row, g, 1.0);
                lp.add_coefficient(row, cap, -1.0);
            } else {
                int row = lp.add_row("CAP_RES", {t->id, t->node, hl}, RowSense::eq, 0.0);
                lp.add_coefficient(row, g, 1.0);
                lp.add_coefficient(row, s.col("CU", {t->id, t->node, hl}), 1.0);
                lp.add_coefficient(row, cap, -phi[h - 1]);
            }
        }
    }
}

// Level recursion L(h) = L(h-1) + eta_in*IN(h) - OUT(h)/eta_out, closed
// cyclically: the first hour's predecessor is the last hour.
void emit_storage_dynamics(Scope& s)
{
    auto& lp = s.lp;
    for (const auto* st : s.storages) {
        int energy = s.col("N_STO_E", {st->id, st->node});
        int power = s.col("N_STO_P", {st->id, st->node});
        for (std::size_t h = 1; h <= s.hours; ++h) {
            auto hl = hour_label(h);
            Tuple dom{st->id, st->node, hl};
            int level = s.col("STO_L", dom);
            int in = s.col("STO_IN", dom);
            int out = s.col("STO_OUT", dom);
            int row = h == 1 ? lp.add_row("STO_CYCLE", {st->id, st->node}, RowSense::eq, 0.0)
                             : lp.add_row("STO_BAL", dom, RowSense::eq, 0.0);
            if (s.hours > 1) {
                auto prev = hour_label(h == 1 ? s.hours : h - 1);
                lp.add_coefficient(row, level, 1.0);
                lp.add_coefficient(row, s.col("STO_L", {st->id, st->node, prev}), -1.0);
            }
            lp.add_coefficient(row, in, -st->eta_in);
            lp.add_coefficient(row, out, 1.0 / st->eta_out);

            int e_cap = lp.add_row("STO_E_CAP", dom, RowSense::le, 0.0);
            lp.add_coefficient(e_cap, level, 1.0);
            lp.add_coefficient(e_cap, energy, -1.0);
            int in_cap = lp.add_row("STO_P_IN_CAP", dom, RowSense::le, 0.0);
            lp.add_coefficient(in_cap, in, 1.0);
            lp.add_coefficient(in_cap, power, -1.0);
            int out_cap = lp.add_row("STO_P_OUT_CAP", dom, RowSense::le, 0.0);
            lp.add_coefficient(out_cap, out, 1.0);
            lp.add_coefficient(out_cap, power, -1.0);
        }
    }
}

// |F| <= NTC as two rows; directed lines bound each direction separately.
void emit_transfer_limits(Scope& s)
{
    auto& lp = s.lp;
    for (const auto* l : s.lines) {
        int ntc = s.col("NTC", {l->id});
        bool directional = rules::is_directional(*l, s.options);
        for (std::size_t h = 1; h <= s.hours; ++h) {
            auto hl = hour_label(h);
            int f = s.col("F", {l->id, hl});
            int up = lp.add_row("FLOW_UP", {l->id, hl}, RowSense::le, 0.0);
            lp.add_coefficient(up, f, 1.0);
            lp.add_coefficient(up, ntc, -1.0);
            int dn = lp.add_row("FLOW_DN", {l->id, hl}, RowSense::le, 0.0);
            if (directional) {
                lp.add_coefficient(dn, s.col("F_REV", {l->id, hl}), 1.0);
            } else {
                lp.add_coefficient(dn, f, -1.0);
            }
            lp.add_coefficient(dn, ntc, -1.0);
        }
    }
}

void emit_policy_constraints(Scope& s)
{
    auto& lp = s.lp;
    const auto& choices = s.options.choices;
    for (const auto* n : s.nodes) {
        bool share_active = choices.renewable_share && n->min_renewable_share > 0.0;
        if (share_active || s.options.keep_inactive_rows) {
            int row = lp.add_row("RES_SHARE", {n->id}, RowSense::ge,
                                 rules::renewable_share_rhs(s.data, *n, choices));
            for (std::size_t h = 1; h <= s.hours; ++h) {
                auto hl = hour_label(h);
                for (const auto* t : s.techs) {
                    if (t->node == n->id && t->kind == TechKind::variable_renewable) {
                        lp.add_coefficient(row, s.col("G", {t->id, n->id, hl}), 1.0);
                    }
                }
            }
        }
        bool cap_active = choices.co2_cap && n->co2_cap.has_value();
        if (cap_active || s.options.keep_inactive_rows) {
            int row = lp.add_row("CO2_CAP", {n->id}, RowSense::le, rules::co2_rhs(*n, choices));
            for (std::size_t h = 1; h <= s.hours; ++h) {
                auto hl = hour_label(h);
                for (const auto* t : s.techs) {
                    if (t->node == n->id) {
                        lp.add_coefficient(row, s.col("G", {t->id, n->id, hl}), t->co2_intensity);
                    }
                }
            }
        }
    }
}

} // namespace

LinearProgram build_model(const SystemData& data, const ModelConfig& config, const FeatureMatrix& features,
                          const BuildOptions& options)
{
    validate_config(config);
    if (auto active = features.first_active()) {
        throw ValidationError(fmt::format("feature '{}' is active for node '{}'; only the basic module is supported",
                                          active->first, active->second));
    }

    LinearProgram lp;
    Scope s{data, config, options, lp, {}, {}, {}, {}, static_cast<std::size_t>(config.end_hour)};

    std::vector<std::string> wanted = options.country_set.empty() ? data.node_ids() : options.country_set;
    std::set<std::string> included;
    for (const auto& id : wanted) {
        const auto* node = data.find_node(id);
        if (!node) {
            throw ValidationError(fmt::format("country_set references unknown node '{}'", id));
        }
        if (included.insert(id).second) {
            s.nodes.push_back(node);
        }
    }

    auto check_length = [&](const std::string& series, const std::string& owner) {
        auto it = data.series.find(series);
        if (it == data.series.end()) {
            throw ValidationError(fmt::format("{}: unknown time series '{}'", owner, series));
        }
        if (it->second.values.size() != s.hours) {
            throw ValidationError(fmt::format("{}: series '{}' has {} values, expected {}", owner, series,
                                              it->second.values.size(), s.hours));
        }
    };
    for (const auto* n : s.nodes) {
        check_length(n->demand_series, "node '" + n->id + "' demand");
    }
    for (const auto& t : data.technologies) {
        if (!included.count(t.node)) {
            continue;
        }
        if (t.kind == TechKind::variable_renewable) {
            if (t.availability_series.empty()) {
                throw ValidationError(
                    fmt::format("technology '{}' at node '{}': missing availability series", t.id, t.node));
            }
            check_length(t.availability_series, "technology '" + t.id + "' at node '" + t.node + "'");
        }
        s.techs.push_back(&t);
    }
    for (const auto& st : data.storages) {
        if (included.count(st.node)) {
            s.storages.push_back(&st);
        }
    }
    if (config.network_transfer) {
        for (const auto& l : data.lines) {
            if (included.count(l.from_node) && included.count(l.to_node)) {
                s.lines.push_back(&l);
            }
        }
    }

    declare_symbols(lp);
    add_columns(s);
    emit_energy_balance(s);
    emit_capacity_limits(s);
    emit_storage_dynamics(s);
    emit_transfer_limits(s);
    emit_policy_constraints(s);
    assemble_objective(lp, data, config);
    if (config.dispatch_only) {
        apply_dispatch_only(lp, dispatch_capacities(data));
    }
    return lp;
}

void assemble_objective(LinearProgram& lp, const SystemData& data, const ModelConfig& config)
{
    for (int j : lp.columns_of("G")) {
        const auto& c = lp.columns()[j];
        lp.set_cost(j, data.find_technology(c.domain[0], c.domain[1])->c_var);
    }
    for (int j : lp.columns_of("N")) {
        const auto& c = lp.columns()[j];
        lp.set_cost(j, rules::capacity_cost(*data.find_technology(c.domain[0], c.domain[1]), config));
    }
    for (int j : lp.columns_of("N_STO_E")) {
        const auto& c = lp.columns()[j];
        lp.set_cost(j, rules::storage_energy_cost(*data.find_storage(c.domain[0], c.domain[1]), config));
    }
    for (int j : lp.columns_of("N_STO_P")) {
        const auto& c = lp.columns()[j];
        lp.set_cost(j, rules::storage_power_cost(*data.find_storage(c.domain[0], c.domain[1]), config));
    }
    for (int j : lp.columns_of("STO_OUT")) {
        const auto& c = lp.columns()[j];
        lp.set_cost(j, data.find_storage(c.domain[0], c.domain[1])->c_var_sto);
    }
    for (int j : lp.columns_of("NTC")) {
        lp.set_cost(j, rules::ntc_cost(*data.find_line(lp.columns()[j].domain[0]), config));
    }
    for (int j : lp.columns_of("SLACK")) {
        lp.set_cost(j, config.slack_penalty);
    }
}

void apply_dispatch_only(LinearProgram& lp, const FixedCapacities& fixed)
{
    for (const char* name : {"N", "N_STO_E", "N_STO_P", "NTC"}) {
        for (int j : lp.columns_of(name)) {
            const auto& c = lp.columns()[j];
            auto it = fixed.find({c.name, c.domain});
            if (it == fixed.end()) {
                throw ValidationError("dispatch-only run has no capacity for " + LinearProgram::key(c.name, c.domain));
            }
            lp.set_bounds(j, it->second, it->second);
        }
    }
}

FixedCapacities dispatch_capacities(const SystemData& data)
{
    FixedCapacities out;
    auto pick = [&](const std::string& column, const Tuple& domain, double fallback) {
        auto it = data.fixed_capacities.find({column, domain});
        out[{column, domain}] = it == data.fixed_capacities.end() ? fallback : it->second;
    };
    for (const auto& t : data.technologies) {
        pick("N", {t.id, t.node}, t.cap_min);
    }
    for (const auto& s : data.storages) {
        pick("N_STO_E", {s.id, s.node}, s.e_min);
        pick("N_STO_P", {s.id, s.node}, s.p_min);
    }
    for (const auto& l : data.lines) {
        pick("NTC", {l.id}, l.ntc_existing);
    }
    return out;
}

std::vector<LpUpdate> choice_updates(const LinearProgram& lp, const SystemData& data, const ModelConfig& config,
                                     const ConstraintChoices& choices)
{
    std::vector<LpUpdate> updates;
    for (int i : lp.rows_of("RES_SHARE")) {
        const auto* node = data.find_node(lp.rows()[i].domain[0]);
        updates.push_back(LpUpdate::rhs(i, rules::renewable_share_rhs(data, *node, choices)));
    }
    for (int i : lp.rows_of("CO2_CAP")) {
        const auto* node = data.find_node(lp.rows()[i].domain[0]);
        updates.push_back(LpUpdate::rhs(i, rules::co2_rhs(*node, choices)));
    }
    if (!config.dispatch_only) {
        for (int j : lp.columns_of("NTC")) {
            const auto* line = data.find_line(lp.columns()[j].domain[0]);
            updates.push_back(LpUpdate::lower(j, line->ntc_existing));
            updates.push_back(LpUpdate::upper(j, choices.ntc_expansion ? line->ntc_max : line->ntc_existing));
        }
    }
    return updates;
}

Exclusion exclusion_updates(const LinearProgram& lp, const SystemData& data,
                            const std::vector<std::string>& active_nodes)
{
    std::set<std::string> active(active_nodes.begin(), active_nodes.end());
    auto touches_inactive = [&](const std::string& name, const Tuple& domain) {
        const auto* info = lp.symbol(name);
        if (!info) {
            return false;
        }
        for (std::size_t k = 0; k < info->dims.size() && k < domain.size(); ++k) {
            if (info->dims[k] == "n" && !active.count(domain[k])) {
                return true;
            }
            if (info->dims[k] == "l") {
                const auto* line = data.find_line(domain[k]);
                if (line && (!active.count(line->from_node) || !active.count(line->to_node))) {
                    return true;
                }
            }
        }
        return false;
    };

    Exclusion out;
    for (std::size_t j = 0; j < lp.num_columns(); ++j) {
        const auto& c = lp.columns()[j];
        if (touches_inactive(c.name, c.domain)) {
            int col = static_cast<int>(j);
            out.columns.push_back(col);
            out.updates.push_back(LpUpdate::lower(col, 0.0));
            out.updates.push_back(LpUpdate::upper(col, 0.0));
        }
    }
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const auto& r = lp.rows()[i];
        if (touches_inactive(r.name, r.domain)) {
            int row = static_cast<int>(i);
            out.rows.push_back(row);
            double rhs = r.sense == RowSense::eq ? 0.0 : (r.sense == RowSense::ge ? -infinity : infinity);
            out.updates.push_back(LpUpdate::rhs(row, rhs));
        }
    }
    return out;
}

} // namespace voltaic
