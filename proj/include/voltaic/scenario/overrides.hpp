#pragma once

#include "voltaic/model/builder.hpp"
#include "voltaic/model/parameters.hpp"
#include "voltaic/scenario/iteration_table.hpp"

#include <string>
#include <vector>

namespace voltaic {

/// Base inputs every scenario starts from.
struct ScenarioBase {
    SystemData data;
    ModelConfig config;
    FeatureMatrix features;
    ConstraintChoices choices;
};

/// Scenario inputs after parameter, series and choice overrides: what a
/// rebuild would compile from.
struct EffectiveInputs {
    SystemData data;
    ModelConfig config;
    ConstraintChoices choices;
    std::vector<std::string> active_nodes;
    /// Parameter records changed by the scenario, in first-touch order.
    std::vector<std::pair<std::string, Tuple>> touched;
};

/// Applies parameter, series and constraint-choice overrides to a copy of
/// the base. Set-name domain entries fan out over the set (nodes limited
/// to the scenario's country set); literals select one element. Throws
/// ValidationError for unknown parameters, literals outside their set or
/// nodes outside the data.
EffectiveInputs apply_overrides(const ScenarioSpec& spec, const ScenarioBase& base);

/// Bound deltas of the variable overrides (.fx gives a lower and an upper
/// delta per column) against a built program.
std::vector<LpUpdate> variable_updates(const ScenarioSpec& spec, const LinearProgram& lp,
                                       const EffectiveInputs& inputs);

/// Everything one scenario changes on a compiled base instance.
struct ExpandedScenario {
    EffectiveInputs inputs;
    std::vector<LpUpdate> deltas;
    std::vector<int> excluded_columns;
    std::vector<int> excluded_rows;
};

/// Deltas that turn the base program (built over every node with inactive
/// rows kept) into the scenario: parameter and series deltas, constraint
/// choices, variable bounds and finally the country-set exclusion. Later
/// deltas win on the same target.
ExpandedScenario expand_overrides(const ScenarioSpec& spec, const LinearProgram& lp, const ScenarioBase& base);

} // namespace voltaic
