#pragma once

#include "voltaic/scenario/overrides.hpp"
#include "voltaic/solver/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace voltaic {

enum class RunMode { rebuild, single_instance, parallel };

std::string to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view s);

/// Mode implied by the project switches: GUSS off -> rebuild, GUSS on ->
/// single_instance, GUSS_parallel on -> parallel.
RunMode mode_from_config(const ModelConfig& config);

struct RunResult {
    std::string run_id;
    std::size_t index = 0;
    Solution solution;
    std::string error; // set when the run could not be solved at all
    std::vector<LpUpdate> deltas;
    /// Program the solution is indexed by (shared base or a rebuild).
    std::shared_ptr<const LinearProgram> program;
    EffectiveInputs inputs;
    std::vector<int> excluded_columns;
    std::vector<int> excluded_rows;
    double wall_seconds = 0.0;

    bool ok() const { return error.empty() && solution.optimal(); }
    std::string status_text() const { return error.empty() ? to_string(solution.status) : "error"; }
};

struct RunOptions {
    RunMode mode = RunMode::single_instance;
    std::size_t threads = 0; // parallel mode; 0 = every core
    SolverOptions solver;
    /// Called on the worker just before run `index` solves (tests use it
    /// to perturb completion order).
    std::function<void(std::size_t index)> before_run;
};

/// Solves every spec; result i belongs to spec i whatever the completion
/// order. A failing run records its error and the others proceed.
///
/// rebuild:         each run compiles its own program from its effective inputs.
/// single_instance: one compiled base over all nodes; each run restores
///                  the base (values and basis), applies its deltas, resolves.
/// parallel:        as single_instance, specs dealt round-robin to workers,
///                  each owning a copy of the solved base instance.
std::vector<RunResult> run_scenarios(const std::vector<ScenarioSpec>& specs, const ScenarioBase& base,
                                     const RunOptions& options);

/// Objective split into capacity (N, N_STO_E, N_STO_P, NTC) and the rest.
struct ObjectiveBreakdown {
    double total = 0.0;
    double investment = 0.0;
    double variable = 0.0;
};
ObjectiveBreakdown objective_breakdown(const LinearProgram& lp, const std::vector<double>& primal);

} // namespace voltaic
