#pragma once

#include "voltaic/model/linear_program.hpp"
#include "voltaic/model/types.hpp"

#include <set>
#include <string>
#include <vector>

namespace voltaic {

/// Named alternative constraint blocks a scenario can switch.
struct ConstraintChoices {
    bool renewable_share = true;
    bool co2_cap = true;
    bool ntc_expansion = true;
};

struct ConstraintBlock {
    std::string name;
    std::vector<std::string> choices;
    std::string default_choice;
};

/// Blocks the model registers: renewable_share, co2_cap, ntc_expansion,
/// each with choices {on, off}.
const std::vector<ConstraintBlock>& constraint_blocks();

/// Sets one block by name. Throws ValidationError for an unknown block or
/// a choice the block does not offer.
void set_constraint_choice(ConstraintChoices& choices, const std::string& block, const std::string& choice);

struct BuildOptions {
    /// Nodes to model; empty means every node in the data.
    std::vector<std::string> country_set;
    ConstraintChoices choices;
    /// Emit policy rows even when vacuous or switched off (with an inert
    /// rhs), so a compiled instance can later toggle them by rhs updates.
    bool keep_inactive_rows = false;
    /// Lines modelled with two directed flow columns even at zero loss,
    /// so their loss factor can later change by coefficient updates.
    std::set<std::string> directional_lines;
};

/// Compiles data + configuration into the dispatch-and-investment LP.
///
/// Columns per included node n and hour h: G(tech,n,h), CU(tech,n,h) for
/// variable renewables, N(tech,n), STO_IN/STO_OUT/STO_L(sto,n,h),
/// N_STO_E/N_STO_P(sto,n), SLACK(n,h) when infeasibility is on; per line
/// with both ends included and network_transfer on: NTC(l), F(l,h) and,
/// for lossy lines, F_REV(l,h).
///
/// Throws ValidationError for an unknown node in the country set, a time
/// series whose length differs from end_hour, or an active feature flag.
LinearProgram build_model(const SystemData& data, const ModelConfig& config,
                          const FeatureMatrix& features, const BuildOptions& options = {});

/// Writes every column's objective coefficient from the data. Annualized
/// investment and fixed costs are pro-rated by end_hour / 8760.
void assemble_objective(LinearProgram& lp, const SystemData& data, const ModelConfig& config);

/// Fixes every capacity column (N, N_STO_E, N_STO_P, NTC) by setting both
/// bounds to the supplied value. Costs on those columns stay in place.
/// Throws ValidationError when a capacity column has no value.
void apply_dispatch_only(LinearProgram& lp, const FixedCapacities& fixed);

/// Default fixed capacities for dispatch-only runs: explicit entries from
/// the data, else the lower expansion bound of each capacity.
FixedCapacities dispatch_capacities(const SystemData& data);

// Cost and bound rules shared by the builder and by in-place scenario
// updates, so both paths produce identical numbers.
namespace rules {
double capacity_cost(const Technology& t, const ModelConfig& config);
double storage_energy_cost(const StorageTech& s, const ModelConfig& config);
double storage_power_cost(const StorageTech& s, const ModelConfig& config);
double ntc_cost(const Line& l, const ModelConfig& config);
std::pair<double, double> capacity_bounds(const SystemData& data, const ModelConfig& config,
                                          const std::string& column, const Tuple& domain);
double renewable_share_rhs(const SystemData& data, const Node& node, const ConstraintChoices& choices);
double co2_rhs(const Node& node, const ConstraintChoices& choices);
bool is_directional(const Line& line, const BuildOptions& options);
} // namespace rules

/// Updates that bring a built LP in line with new constraint choices.
std::vector<LpUpdate> choice_updates(const LinearProgram& lp, const SystemData& data,
                                     const ModelConfig& config, const ConstraintChoices& choices);

/// Updates that remove every node outside `active_nodes` from a built LP:
/// their columns are fixed to zero and their demand rows cleared. Lines
/// with an inactive endpoint are fixed to zero as well. Also returns the
/// affected column and row indices.
struct Exclusion {
    std::vector<LpUpdate> updates;
    std::vector<int> columns;
    std::vector<int> rows;
};
Exclusion exclusion_updates(const LinearProgram& lp, const SystemData& data,
                            const std::vector<std::string>& active_nodes);

} // namespace voltaic
