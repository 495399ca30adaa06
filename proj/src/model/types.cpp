#include "voltaic/model/types.hpp"

#include "voltaic/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <set>

namespace voltaic {

std::string to_string(TechKind kind)
{
    return kind == TechKind::dispatchable ? "dispatchable" : "variable_renewable";
}

std::optional<TechKind> parse_tech_kind(std::string_view s)
{
    auto t = to_lower(trim(s));
    if (t == "dispatchable") {
        return TechKind::dispatchable;
    }
    if (t == "variable_renewable" || t == "res" || t == "vre") {
        return TechKind::variable_renewable;
    }
    return std::nullopt;
}

namespace {

template <typename Range, typename Pred>
auto find_in(Range& range, Pred pred) -> decltype(&*range.begin())
{
    auto it = std::find_if(range.begin(), range.end(), pred);
    return it == range.end() ? nullptr : &*it;
}

template <typename Range, typename Key>
std::vector<std::string> unique_ids(const Range& range, Key key)
{
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& item : range) {
        const std::string& id = key(item);
        if (seen.insert(id).second) {
            out.push_back(id);
        }
    }
    return out;
}

} // namespace

const Node* SystemData::find_node(std::string_view id) const
{
    return find_in(nodes, [&](const Node& n) { return n.id == id; });
}
Node* SystemData::find_node(std::string_view id)
{
    return find_in(nodes, [&](const Node& n) { return n.id == id; });
}
const Technology* SystemData::find_technology(std::string_view tech, std::string_view node) const
{
    return find_in(technologies, [&](const Technology& t) { return t.id == tech && t.node == node; });
}
Technology* SystemData::find_technology(std::string_view tech, std::string_view node)
{
    return find_in(technologies, [&](const Technology& t) { return t.id == tech && t.node == node; });
}
const StorageTech* SystemData::find_storage(std::string_view sto, std::string_view node) const
{
    return find_in(storages, [&](const StorageTech& s) { return s.id == sto && s.node == node; });
}
StorageTech* SystemData::find_storage(std::string_view sto, std::string_view node)
{
    return find_in(storages, [&](const StorageTech& s) { return s.id == sto && s.node == node; });
}
const Line* SystemData::find_line(std::string_view id) const
{
    return find_in(lines, [&](const Line& l) { return l.id == id; });
}
Line* SystemData::find_line(std::string_view id)
{
    return find_in(lines, [&](const Line& l) { return l.id == id; });
}

const TimeSeries& SystemData::series_named(std::string_view name) const
{
    auto it = series.find(std::string(name));
    if (it == series.end()) {
        throw ValidationError(fmt::format("unknown time series '{}'", name));
    }
    return it->second;
}

std::vector<std::string> SystemData::node_ids() const
{
    return unique_ids(nodes, [](const Node& n) -> const std::string& { return n.id; });
}
std::vector<std::string> SystemData::tech_ids() const
{
    return unique_ids(technologies, [](const Technology& t) -> const std::string& { return t.id; });
}
std::vector<std::string> SystemData::storage_ids() const
{
    return unique_ids(storages, [](const StorageTech& s) -> const std::string& { return s.id; });
}
std::vector<std::string> SystemData::line_ids() const
{
    return unique_ids(lines, [](const Line& l) -> const std::string& { return l.id; });
}

std::optional<TechKind> SystemData::kind_of(std::string_view tech) const
{
    for (const auto& t : technologies) {
        if (t.id == tech) {
            return t.kind;
        }
    }
    return std::nullopt;
}

FeatureMatrix FeatureMatrix::all_off(const std::vector<std::string>& nodes)
{
    FeatureMatrix m;
    m.nodes = nodes;
    for (const char* module : feature_modules) {
        m.flags[module] = std::vector<int>(nodes.size(), 0);
    }
    return m;
}

std::optional<std::pair<std::string, std::string>> FeatureMatrix::first_active() const
{
    for (const char* module : feature_modules) {
        auto it = flags.find(module);
        if (it == flags.end()) {
            continue;
        }
        for (std::size_t i = 0; i < it->second.size() && i < nodes.size(); ++i) {
            if (it->second[i] != 0) {
                return std::make_pair(std::string(module), nodes[i]);
            }
        }
    }
    return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& field, const std::string& reason)
{
    throw ValidationError(fmt::format("{}: field '{}' {}", what, field, reason));
}

void require_finite(double v, const std::string& what, const char* field)
{
    if (!std::isfinite(v)) {
        fail(what, field, "must be finite");
    }
}

void require_nonnegative(double v, const std::string& what, const char* field)
{
    require_finite(v, what, field);
    if (v < 0.0) {
        fail(what, field, fmt::format("must be >= 0 (got {})", v));
    }
}

void require_series(const SystemData& data, const ModelConfig& config, const std::string& name,
                    const std::string& what, const char* field, bool unit_interval)
{
    auto it = data.series.find(name);
    if (it == data.series.end()) {
        fail(what, field, fmt::format("references unknown time series '{}'", name));
    }
    const auto& values = it->second.values;
    if (values.size() != static_cast<std::size_t>(config.end_hour)) {
        fail(what, field,
             fmt::format("series '{}' has {} values but end_hour is {}", name, values.size(),
                         config.end_hour));
    }
    for (std::size_t h = 0; h < values.size(); ++h) {
        double v = values[h];
        if (!std::isfinite(v)) {
            fail(what, field, fmt::format("series '{}' value at {} is not finite", name, hour_label(h + 1)));
        }
        if (unit_interval && (v < 0.0 || v > 1.0)) {
            fail(what, field,
                 fmt::format("series '{}' value {} at {} outside [0,1]", name, v, hour_label(h + 1)));
        }
    }
}

} // namespace

void validate_config(const ModelConfig& config)
{
    if (config.end_hour < 1 || config.end_hour > 8760) {
        fail("project_variables", "end_hour", fmt::format("must be in [1,8760] (got {})", config.end_hour));
    }
    if (config.guss_parallel_threads < 0) {
        fail("project_variables", "GUSS_parallel_threads", "must be >= 0");
    }
    if (!std::isfinite(config.slack_penalty) || config.slack_penalty <= 0.0) {
        fail("project_variables", "slack_penalty", "must be a positive number");
    }
}

void validate_system(const SystemData& data, const ModelConfig& config)
{
    validate_config(config);

    std::set<std::string> node_ids;
    for (const auto& n : data.nodes) {
        std::string what = fmt::format("node '{}'", n.id);
        if (n.id.empty()) {
            fail("node", "id", "must not be empty");
        }
        if (!node_ids.insert(n.id).second) {
            fail(what, "id", "is duplicated");
        }
        require_finite(n.min_renewable_share, what, "min_renewable_share");
        if (n.min_renewable_share < 0.0 || n.min_renewable_share > 1.0) {
            fail(what, "min_renewable_share", fmt::format("must be in [0,1] (got {})", n.min_renewable_share));
        }
        if (n.co2_cap) {
            require_nonnegative(*n.co2_cap, what, "co2_cap");
        }
        require_series(data, config, n.demand_series, what, "demand", false);
    }

    std::map<std::string, TechKind> kinds;
    std::set<std::pair<std::string, std::string>> tech_keys;
    for (const auto& t : data.technologies) {
        std::string what = fmt::format("technology '{}' at node '{}'", t.id, t.node);
        if (t.id.empty()) {
            fail(what, "id", "must not be empty");
        }
        if (!node_ids.count(t.node)) {
            fail(what, "node", "references an unknown node");
        }
        if (!tech_keys.insert({t.id, t.node}).second) {
            fail(what, "id", "is duplicated at this node");
        }
        auto [it, inserted] = kinds.emplace(t.id, t.kind);
        if (!inserted && it->second != t.kind) {
            fail(what, "kind", "differs from the same technology at another node");
        }
        require_nonnegative(t.c_inv_power, what, "c_inv_power");
        require_nonnegative(t.c_fix, what, "c_fix");
        require_nonnegative(t.c_var, what, "c_var");
        require_nonnegative(t.co2_intensity, what, "co2_intensity");
        require_nonnegative(t.cap_min, what, "cap_min");
        require_finite(t.cap_max, what, "cap_max");
        if (t.cap_max < t.cap_min) {
            fail(what, "cap_max", fmt::format("must be >= cap_min ({} < {})", t.cap_max, t.cap_min));
        }
        if (t.kind == TechKind::variable_renewable) {
            if (t.availability_series.empty()) {
                fail(what, "availability", "is required for a variable_renewable technology");
            }
            require_series(data, config, t.availability_series, what, "availability", true);
        } else if (!t.availability_series.empty()) {
            fail(what, "availability", "is only allowed for variable_renewable technologies");
        }
        if (config.infeasibility && t.c_var >= config.slack_penalty) {
            fail(what, "c_var", fmt::format("must be below slack_penalty {} when infeasibility is on",
                                            config.slack_penalty));
        }
    }

    std::set<std::pair<std::string, std::string>> sto_keys;
    for (const auto& s : data.storages) {
        std::string what = fmt::format("storage '{}' at node '{}'", s.id, s.node);
        if (s.id.empty()) {
            fail(what, "id", "must not be empty");
        }
        if (!node_ids.count(s.node)) {
            fail(what, "node", "references an unknown node");
        }
        if (!sto_keys.insert({s.id, s.node}).second) {
            fail(what, "id", "is duplicated at this node");
        }
        require_nonnegative(s.c_i_sto_e, what, "c_i_sto_e");
        require_nonnegative(s.c_i_sto_p, what, "c_i_sto_p");
        require_nonnegative(s.c_fix_sto, what, "c_fix_sto");
        require_nonnegative(s.c_var_sto, what, "c_var_sto");
        for (auto [value, field] : {std::pair{s.eta_in, "eta_in"}, std::pair{s.eta_out, "eta_out"}}) {
            require_finite(value, what, field);
            if (value <= 0.0 || value > 1.0) {
                fail(what, field, fmt::format("must be in (0,1] (got {})", value));
            }
        }
        require_nonnegative(s.e_min, what, "e_min");
        require_finite(s.e_max, what, "e_max");
        if (s.e_max < s.e_min) {
            fail(what, "e_max", "must be >= e_min");
        }
        require_nonnegative(s.p_min, what, "p_min");
        require_finite(s.p_max, what, "p_max");
        if (s.p_max < s.p_min) {
            fail(what, "p_max", "must be >= p_min");
        }
    }

    std::set<std::string> line_ids;
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& l : data.lines) {
        std::string what = fmt::format("line '{}'", l.id);
        if (l.id.empty()) {
            fail("line", "id", "must not be empty");
        }
        if (!line_ids.insert(l.id).second) {
            fail(what, "id", "is duplicated");
        }
        if (!node_ids.count(l.from_node)) {
            fail(what, "from_node", "references an unknown node");
        }
        if (!node_ids.count(l.to_node)) {
            fail(what, "to_node", "references an unknown node");
        }
        if (l.from_node == l.to_node) {
            fail(what, "to_node", "must differ from from_node");
        }
        auto key = std::minmax(l.from_node, l.to_node);
        if (!pairs.insert({key.first, key.second}).second) {
            fail(what, "to_node", "duplicates another line between the same nodes");
        }
        require_nonnegative(l.ntc_existing, what, "ntc_existing");
        require_finite(l.ntc_max, what, "ntc_max");
        if (l.ntc_max < l.ntc_existing) {
            fail(what, "ntc_max", "must be >= ntc_existing");
        }
        require_nonnegative(l.c_inv_ntc, what, "c_inv_ntc");
        require_finite(l.loss_factor, what, "loss_factor");
        if (l.loss_factor < 0.0 || l.loss_factor >= 1.0) {
            fail(what, "loss_factor", fmt::format("must be in [0,1) (got {})", l.loss_factor));
        }
    }
}

} // namespace voltaic
