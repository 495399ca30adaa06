#include "voltaic/model/parameters.hpp"

#include "voltaic/common/error.hpp"

#include <algorithm>
#include <fmt/core.h>

namespace voltaic {

const std::vector<ParameterInfo>& parameter_catalogue()
{
    static const std::vector<ParameterInfo> catalogue = {
        {"c_var", {"n", "tech"}, false, "EUR/MWh"},
        {"c_inv_power", {"n", "tech"}, false, "EUR/MW/a"},
        {"c_fix", {"n", "tech"}, false, "EUR/MW/a"},
        {"co2_intensity", {"n", "tech"}, false, "t/MWh"},
        {"cap_min", {"n", "tech"}, false, "MW"},
        {"cap_max", {"n", "tech"}, false, "MW"},
        {"c_i_sto_e", {"n", "sto"}, false, "EUR/MWh/a"},
        {"c_i_sto_p", {"n", "sto"}, false, "EUR/MW/a"},
        {"c_fix_sto", {"n", "sto"}, false, "EUR/MW/a"},
        {"c_var_sto", {"n", "sto"}, false, "EUR/MWh"},
        {"eta_in", {"n", "sto"}, false, ""},
        {"eta_out", {"n", "sto"}, false, ""},
        {"e_min", {"n", "sto"}, false, "MWh"},
        {"e_max", {"n", "sto"}, false, "MWh"},
        {"p_min", {"n", "sto"}, false, "MW"},
        {"p_max", {"n", "sto"}, false, "MW"},
        {"ntc_existing", {"l"}, false, "MW"},
        {"ntc_max", {"l"}, false, "MW"},
        {"c_inv_ntc", {"l"}, false, "EUR/MW/a"},
        {"loss_factor", {"l"}, false, ""},
        {"min_renewable_share", {"n"}, false, ""},
        {"co2_cap", {"n"}, false, "t"},
        {"slack_penalty", {}, false, "EUR/MWh"},
        {"d", {"n"}, true, "MWh"},
        {"phi", {"n", "tech"}, true, ""},
    };
    return catalogue;
}

const ParameterInfo* find_parameter(std::string_view name)
{
    const auto& cat = parameter_catalogue();
    auto it = std::find_if(cat.begin(), cat.end(), [&](const ParameterInfo& p) { return p.name == name; });
    return it == cat.end() ? nullptr : &*it;
}

std::vector<std::string> set_elements(const SystemData& data, const ModelConfig& config, std::string_view set)
{
    if (set == "n") {
        return data.node_ids();
    }
    if (set == "tech") {
        return data.tech_ids();
    }
    if (set == "sto") {
        return data.storage_ids();
    }
    if (set == "l") {
        return data.line_ids();
    }
    if (set == "h") {
        std::vector<std::string> hours;
        for (int h = 1; h <= config.end_hour; ++h) {
            hours.push_back(hour_label(static_cast<std::size_t>(h)));
        }
        return hours;
    }
    throw ValidationError(fmt::format("unknown set '{}'", set));
}

namespace {

enum class Owner { technology, storage, line, node, scalar };

Owner owner_of(const ParameterInfo& info)
{
    if (info.dims.empty()) {
        return Owner::scalar;
    }
    if (info.dims.size() == 1) {
        return info.dims[0] == "l" ? Owner::line : Owner::node;
    }
    return info.dims[1] == "tech" ? Owner::technology : Owner::storage;
}

const ParameterInfo& require(std::string_view name)
{
    const auto* info = find_parameter(name);
    if (!info) {
        throw ValidationError(fmt::format("unknown parameter '{}'", name));
    }
    return *info;
}

void check_arity(const ParameterInfo& info, const Tuple& tuple)
{
    if (tuple.size() != info.dims.size()) {
        throw ValidationError(fmt::format("parameter '{}' takes {} index(es), got {}", info.name, info.dims.size(),
                                          tuple.size()));
    }
}

template <typename Data>
auto* technology(Data& data, const ParameterInfo& info, const Tuple& t)
{
    auto* p = data.find_technology(t[1], t[0]);
    if (!p) {
        throw ValidationError(fmt::format("parameter '{}': no technology '{}' at node '{}'", info.name, t[1], t[0]));
    }
    return p;
}

template <typename Data>
auto* storage(Data& data, const ParameterInfo& info, const Tuple& t)
{
    auto* p = data.find_storage(t[1], t[0]);
    if (!p) {
        throw ValidationError(fmt::format("parameter '{}': no storage '{}' at node '{}'", info.name, t[1], t[0]));
    }
    return p;
}

template <typename Data>
auto* line(Data& data, const ParameterInfo& info, const Tuple& t)
{
    auto* p = data.find_line(t[0]);
    if (!p) {
        throw ValidationError(fmt::format("parameter '{}': no line '{}'", info.name, t[0]));
    }
    return p;
}

template <typename Data>
auto* node(Data& data, const ParameterInfo& info, const Tuple& t)
{
    auto* p = data.find_node(t[0]);
    if (!p) {
        throw ValidationError(fmt::format("parameter '{}': no node '{}'", info.name, t[0]));
    }
    return p;
}

// Field accessor shared by get and set.
template <typename Data, typename Config>
auto* field(Data& data, Config& config, const ParameterInfo& info, const Tuple& t)
{
    using Ptr = decltype(&config.slack_penalty);
    const auto& n = info.name;
    switch (owner_of(info)) {
    case Owner::technology: {
        auto* p = technology(data, info, t);
        if (n == "c_var") return Ptr(&p->c_var);
        if (n == "c_inv_power") return Ptr(&p->c_inv_power);
        if (n == "c_fix") return Ptr(&p->c_fix);
        if (n == "co2_intensity") return Ptr(&p->co2_intensity);
        if (n == "cap_min") return Ptr(&p->cap_min);
        if (n == "cap_max") return Ptr(&p->cap_max);
        break;
    }
    case Owner::storage: {
        auto* p = storage(data, info, t);
        if (n == "c_i_sto_e") return Ptr(&p->c_i_sto_e);
        if (n == "c_i_sto_p") return Ptr(&p->c_i_sto_p);
        if (n == "c_fix_sto") return Ptr(&p->c_fix_sto);
        if (n == "c_var_sto") return Ptr(&p->c_var_sto);
        if (n == "eta_in") return Ptr(&p->eta_in);
        if (n == "eta_out") return Ptr(&p->eta_out);
        if (n == "e_min") return Ptr(&p->e_min);
        if (n == "e_max") return Ptr(&p->e_max);
        if (n == "p_min") return Ptr(&p->p_min);
        if (n == "p_max") return Ptr(&p->p_max);
        break;
    }
    case Owner::line: {
        auto* p = line(data, info, t);
        if (n == "ntc_existing") return Ptr(&p->ntc_existing);
        if (n == "ntc_max") return Ptr(&p->ntc_max);
        if (n == "c_inv_ntc") return Ptr(&p->c_inv_ntc);
        if (n == "loss_factor") return Ptr(&p->loss_factor);
        break;
    }
    case Owner::node: {
        auto* p = node(data, info, t);
        if (n == "min_renewable_share") return Ptr(&p->min_renewable_share);
        break;
    }
    case Owner::scalar:
        if (n == "slack_penalty") return Ptr(&config.slack_penalty);
        break;
    }
    return Ptr(nullptr);
}

} // namespace

bool parameter_exists(const SystemData& data, std::string_view name, const Tuple& tuple)
{
    const auto& info = require(name);
    if (tuple.size() != info.dims.size()) {
        return false;
    }
    switch (owner_of(info)) {
    case Owner::technology:
        return data.find_technology(tuple[1], tuple[0]) != nullptr &&
               (info.name != "phi" || data.kind_of(tuple[1]) == TechKind::variable_renewable);
    case Owner::storage:
        return data.find_storage(tuple[1], tuple[0]) != nullptr;
    case Owner::line:
        return data.find_line(tuple[0]) != nullptr;
    case Owner::node:
        return data.find_node(tuple[0]) != nullptr;
    case Owner::scalar:
        return true;
    }
    return false;
}

double get_parameter(const SystemData& data, const ModelConfig& config, std::string_view name, const Tuple& tuple)
{
    const auto& info = require(name);
    check_arity(info, tuple);
    if (info.is_series) {
        throw ValidationError(fmt::format("parameter '{}' is a time series", name));
    }
    if (info.name == "co2_cap") {
        const auto* n = node(data, info, tuple);
        return n->co2_cap ? *n->co2_cap : infinity;
    }
    return *field(data, config, info, tuple);
}

void set_parameter(SystemData& data, ModelConfig& config, std::string_view name, const Tuple& tuple, double value)
{
    const auto& info = require(name);
    check_arity(info, tuple);
    if (info.is_series) {
        throw ValidationError(fmt::format("parameter '{}' takes a series name, not a number", name));
    }
    if (info.name == "co2_cap") {
        node(data, info, tuple)->co2_cap = value;
        return;
    }
    *field(data, config, info, tuple) = value;
}

void set_series_reference(SystemData& data, std::string_view name, const Tuple& tuple, const std::string& series)
{
    const auto& info = require(name);
    check_arity(info, tuple);
    if (!info.is_series) {
        throw ValidationError(fmt::format("parameter '{}' is not a time series", name));
    }
    if (!data.series.count(series)) {
        throw ValidationError(fmt::format("parameter '{}': unknown time series '{}'", name, series));
    }
    if (info.name == "d") {
        node(data, info, tuple)->demand_series = series;
    } else {
        auto* t = technology(data, info, tuple);
        if (t->kind != TechKind::variable_renewable) {
            throw ValidationError(fmt::format("phi: technology '{}' is not variable_renewable", t->id));
        }
        t->availability_series = series;
    }
}

std::vector<LpUpdate> parameter_updates(const LinearProgram& lp, const SystemData& effective,
                                        const ModelConfig& config, const ConstraintChoices& choices,
                                        std::string_view name, const Tuple& tuple)
{
    const auto& info = require(name);
    check_arity(info, tuple);
    std::vector<LpUpdate> out;
    const auto hours = static_cast<std::size_t>(config.end_hour);

    auto column = [&](const char* sym, const Tuple& dom) { return lp.find_column(sym, dom); };
    auto bounds = [&](const char* sym, const Tuple& dom) {
        if (auto j = column(sym, dom)) {
            auto [lo, hi] = rules::capacity_bounds(effective, config, sym, dom);
            out.push_back(LpUpdate::lower(*j, lo));
            out.push_back(LpUpdate::upper(*j, hi));
        }
    };
    auto hourly_cost = [&](const char* sym, const Tuple& prefix, double value) {
        for (std::size_t h = 1; h <= hours; ++h) {
            Tuple dom = prefix;
            dom.push_back(hour_label(h));
            if (auto j = column(sym, dom)) {
                out.push_back(LpUpdate::cost(*j, value));
            }
        }
    };

    const auto& n = info.name;
    switch (owner_of(info)) {
    case Owner::technology: {
        const auto* t = technology(effective, info, tuple);
        Tuple cap{t->id, t->node};
        if (n == "c_var") {
            hourly_cost("G", cap, t->c_var);
        } else if (n == "c_inv_power" || n == "c_fix") {
            if (auto j = column("N", cap)) {
                out.push_back(LpUpdate::cost(*j, rules::capacity_cost(*t, config)));
            }
        } else if (n == "co2_intensity") {
            if (auto row = lp.find_row("CO2_CAP", {t->node})) {
                for (std::size_t h = 1; h <= hours; ++h) {
                    if (auto j = column("G", {t->id, t->node, hour_label(h)})) {
                        out.push_back(LpUpdate::coefficient(*row, *j, t->co2_intensity));
                    }
                }
            }
        } else if (n == "cap_min" || n == "cap_max") {
            bounds("N", cap);
        } else if (n == "phi") {
            const auto& phi = effective.series_named(t->availability_series).values;
            auto j = column("N", cap);
            for (std::size_t h = 1; h <= hours && j; ++h) {
                if (auto row = lp.find_row("CAP_RES", {t->id, t->node, hour_label(h)})) {
                    out.push_back(LpUpdate::coefficient(*row, *j, -phi.at(h - 1)));
                }
            }
        }
        break;
    }
    case Owner::storage: {
        const auto* s = storage(effective, info, tuple);
        Tuple cap{s->id, s->node};
        if (n == "c_i_sto_e") {
            if (auto j = column("N_STO_E", cap)) {
                out.push_back(LpUpdate::cost(*j, rules::storage_energy_cost(*s, config)));
            }
        } else if (n == "c_i_sto_p" || n == "c_fix_sto") {
            if (auto j = column("N_STO_P", cap)) {
                out.push_back(LpUpdate::cost(*j, rules::storage_power_cost(*s, config)));
            }
        } else if (n == "c_var_sto") {
            hourly_cost("STO_OUT", cap, s->c_var_sto);
        } else if (n == "eta_in" || n == "eta_out") {
            bool in = n == "eta_in";
            for (std::size_t h = 1; h <= hours; ++h) {
                Tuple dom{s->id, s->node, hour_label(h)};
                auto row = h == 1 ? lp.find_row("STO_CYCLE", cap) : lp.find_row("STO_BAL", dom);
                auto j = column(in ? "STO_IN" : "STO_OUT", dom);
                if (row && j) {
                    out.push_back(LpUpdate::coefficient(*row, *j, in ? -s->eta_in : 1.0 / s->eta_out));
                }
            }
        } else if (n == "e_min" || n == "e_max") {
            bounds("N_STO_E", cap);
        } else if (n == "p_min" || n == "p_max") {
            bounds("N_STO_P", cap);
        }
        break;
    }
    case Owner::line: {
        const auto* l = line(effective, info, tuple);
        if (n == "ntc_existing" || n == "ntc_max") {
            if (auto j = column("NTC", {l->id})) {
                auto [lo, hi] = rules::capacity_bounds(effective, config, "NTC", {l->id});
                if (!config.dispatch_only && !choices.ntc_expansion) {
                    hi = lo;
                }
                out.push_back(LpUpdate::lower(*j, lo));
                out.push_back(LpUpdate::upper(*j, hi));
            }
        } else if (n == "c_inv_ntc") {
            if (auto j = column("NTC", {l->id})) {
                out.push_back(LpUpdate::cost(*j, rules::ntc_cost(*l, config)));
            }
        } else if (n == "loss_factor") {
            for (std::size_t h = 1; h <= hours; ++h) {
                auto hl = hour_label(h);
                auto f = column("F", {l->id, hl});
                auto rev = column("F_REV", {l->id, hl});
                auto to = lp.find_row("BAL", {l->to_node, hl});
                auto from = lp.find_row("BAL", {l->from_node, hl});
                if (!f) {
                    continue;
                }
                if (!rev && l->loss_factor != 0.0) {
                    throw SolveError(fmt::format("line '{}' was compiled without a reverse-flow column; "
                                                 "a lossy override needs a rebuild",
                                                 l->id));
                }
                if (to) {
                    out.push_back(LpUpdate::coefficient(*to, *f, 1.0 - l->loss_factor));
                }
                if (from && rev) {
                    out.push_back(LpUpdate::coefficient(*from, *rev, 1.0 - l->loss_factor));
                }
            }
        }
        break;
    }
    case Owner::node: {
        const auto* nd = node(effective, info, tuple);
        if (n == "min_renewable_share") {
            if (auto row = lp.find_row("RES_SHARE", {nd->id})) {
                out.push_back(LpUpdate::rhs(*row, rules::renewable_share_rhs(effective, *nd, choices)));
            }
        } else if (n == "co2_cap") {
            if (auto row = lp.find_row("CO2_CAP", {nd->id})) {
                out.push_back(LpUpdate::rhs(*row, rules::co2_rhs(*nd, choices)));
            }
        } else if (n == "d") {
            const auto& d = effective.series_named(nd->demand_series).values;
            for (std::size_t h = 1; h <= hours; ++h) {
                if (auto row = lp.find_row("BAL", {nd->id, hour_label(h)})) {
                    out.push_back(LpUpdate::rhs(*row, d.at(h - 1)));
                }
            }
            if (auto row = lp.find_row("RES_SHARE", {nd->id})) {
                out.push_back(LpUpdate::rhs(*row, rules::renewable_share_rhs(effective, *nd, choices)));
            }
        }
        break;
    }
    case Owner::scalar:
        for (int j : lp.columns_of("SLACK")) {
            out.push_back(LpUpdate::cost(j, config.slack_penalty));
        }
        break;
    }
    return out;
}

} // namespace voltaic
