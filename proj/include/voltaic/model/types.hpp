#pragma once

#include "voltaic/common/strings.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace voltaic {

inline constexpr double hours_per_year = 8760.0;

enum class TechKind { dispatchable, variable_renewable };

std::string to_string(TechKind kind);
std::optional<TechKind> parse_tech_kind(std::string_view s);

struct TimeSeries {
    std::string name;
    std::vector<double> values;
};

struct Node {
    std::string id;
    std::string demand_series;
    double min_renewable_share = 0.0;
    std::optional<double> co2_cap; // tonnes over the modelled horizon
};

/// One technology as available at one node. Costs are annualized.
struct Technology {
    std::string id;
    std::string node;
    TechKind kind = TechKind::dispatchable;
    double c_inv_power = 0.0; // EUR/MW/a
    double c_fix = 0.0;       // EUR/MW/a
    double c_var = 0.0;       // EUR/MWh
    double co2_intensity = 0.0;
    double cap_min = 0.0; // MW
    double cap_max = 0.0; // MW
    std::string availability_series;
};

struct StorageTech {
    std::string id;
    std::string node;
    double c_i_sto_e = 0.0; // EUR/MWh/a
    double c_i_sto_p = 0.0; // EUR/MW/a
    double c_fix_sto = 0.0; // EUR/MW/a
    double c_var_sto = 0.0; // EUR/MWh discharged
    double eta_in = 1.0;
    double eta_out = 1.0;
    double e_min = 0.0;
    double e_max = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
};

struct Line {
    std::string id;
    std::string from_node;
    std::string to_node;
    double ntc_existing = 0.0;
    double ntc_max = 0.0;
    double c_inv_ntc = 0.0; // EUR/MW/a
    double loss_factor = 0.0;
};

/// Capacity values used when the model runs in dispatch-only mode, keyed
/// by capacity column (e.g. "N", {"gas","DE"}). Missing entries fall back
/// to the lower expansion bound.
using FixedCapacities = std::map<std::pair<std::string, Tuple>, double>;

struct SystemData {
    std::vector<Node> nodes;
    std::vector<Technology> technologies;
    std::vector<StorageTech> storages;
    std::vector<Line> lines;
    std::map<std::string, TimeSeries> series;
    FixedCapacities fixed_capacities;

    const Node* find_node(std::string_view id) const;
    Node* find_node(std::string_view id);
    const Technology* find_technology(std::string_view tech, std::string_view node) const;
    Technology* find_technology(std::string_view tech, std::string_view node);
    const StorageTech* find_storage(std::string_view sto, std::string_view node) const;
    StorageTech* find_storage(std::string_view sto, std::string_view node);
    const Line* find_line(std::string_view id) const;
    Line* find_line(std::string_view id);
    const TimeSeries& series_named(std::string_view name) const;

    // Set elements in first-appearance order.
    std::vector<std::string> node_ids() const;
    std::vector<std::string> tech_ids() const;
    std::vector<std::string> storage_ids() const;
    std::vector<std::string> line_ids() const;
    std::optional<TechKind> kind_of(std::string_view tech) const;
};

struct ModelConfig {
    bool scenarios_iteration = true;
    bool skip_input = false;
    bool skip_iteration_data_file = false;
    int base_year = 2030;
    int end_hour = 8760;
    bool dispatch_only = false;
    bool network_transfer = true;
    bool no_crossover = true; // inert: the bundled solver is simplex-only
    bool infeasibility = false;
    double slack_penalty = 10000.0;
    bool guss = true;
    bool guss_parallel = false;
    int guss_parallel_threads = 0;
    std::string data_input_file = "static_input";
    std::string time_series_file = "timeseries_input";
    std::string iteration_data_file = "iteration_data";
    int convert_parallel_threads = 0;
    bool write_text = true;
    bool write_binary = false;
    bool report_data = true;

    double cost_scale() const { return static_cast<double>(end_hour) / hours_per_year; }
};

inline constexpr std::array<const char*, 6> feature_modules = {
    "dsm", "ev_endogenous", "ev_exogenous", "reserves", "prosumage", "heat"};

/// Optional-module switches per node. Only the basic module is solvable,
/// so every entry must be zero before a model can be built.
struct FeatureMatrix {
    std::vector<std::string> nodes;
    // flags[module][node index]
    std::map<std::string, std::vector<int>> flags;

    static FeatureMatrix all_off(const std::vector<std::string>& nodes);
    /// First active (module, node), if any.
    std::optional<std::pair<std::string, std::string>> first_active() const;
};

/// Checks every field invariant of the data against the horizon. Throws
/// ValidationError naming the offending element and field.
void validate_system(const SystemData& data, const ModelConfig& config);
void validate_config(const ModelConfig& config);

} // namespace voltaic
