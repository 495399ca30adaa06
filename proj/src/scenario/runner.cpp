#include "voltaic/scenario/runner.hpp"

#include "voltaic/common/error.hpp"
#include "voltaic/common/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <fmt/core.h>
#include <set>

namespace voltaic {

std::string to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::rebuild:
        return "rebuild";
    case RunMode::single_instance:
        return "single_instance";
    case RunMode::parallel:
        break;
    }
    return "parallel";
}

std::optional<RunMode> parse_run_mode(std::string_view s)
{
    auto l = to_lower(trim(s));
    if (l == "rebuild") {
        return RunMode::rebuild;
    }
    if (l == "single_instance" || l == "single") {
        return RunMode::single_instance;
    }
    if (l == "parallel") {
        return RunMode::parallel;
    }
    return std::nullopt;
}

RunMode mode_from_config(const ModelConfig& config)
{
    if (!config.guss) {
        return RunMode::rebuild;
    }
    return config.guss_parallel ? RunMode::parallel : RunMode::single_instance;
}

ObjectiveBreakdown objective_breakdown(const LinearProgram& lp, const std::vector<double>& primal)
{
    static const std::set<std::string> capacity = {"N", "N_STO_E", "N_STO_P", "NTC"};
    ObjectiveBreakdown out;
    const auto& cols = lp.columns();
    for (std::size_t j = 0; j < cols.size() && j < primal.size(); ++j) {
        double v = cols[j].cost * primal[j];
        (capacity.count(cols[j].name) ? out.investment : out.variable) += v;
    }
    out.total = out.investment + out.variable;
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

RunResult failed(const ScenarioSpec& spec, std::size_t index, const std::exception& e)
{
    RunResult r;
    r.run_id = spec.run_id;
    r.index = index;
    r.error = e.what();
    return r;
}

RunResult run_rebuild(const ScenarioSpec& spec, std::size_t index, const ScenarioBase& base,
                      const RunOptions& options)
{
    auto start = Clock::now();
    RunResult r;
    r.run_id = spec.run_id;
    r.index = index;
    try {
        if (options.before_run) {
            options.before_run(index);
        }
        r.inputs = apply_overrides(spec, base);
        BuildOptions bo;
        bo.country_set = r.inputs.active_nodes;
        bo.choices = r.inputs.choices;
        auto lp = build_model(r.inputs.data, r.inputs.config, base.features, bo);
        r.deltas = variable_updates(spec, lp, r.inputs);
        lp.apply(r.deltas);
        auto program = std::make_shared<const LinearProgram>(std::move(lp));
        r.solution = SimplexBackend(options.solver).solve(*program);
        r.program = std::move(program);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.wall_seconds = since(start);
    return r;
}

// Lines that some scenario may make lossy need both flow directions as
// separate columns in the shared base.
std::set<std::string> lines_needing_direction(const std::vector<ScenarioSpec>& specs, const SystemData& data)
{
    std::set<std::string> out;
    for (const auto& s : specs) {
        for (const auto& o : s.overrides) {
            if (o.ref.name == "loss_factor" && o.number > 0.0) {
                for (const auto& id : data.line_ids()) {
                    out.insert(id);
                }
                return out;
            }
        }
    }
    return out;
}

// Policy rows that are vacuous in the base only matter when a scenario can
// switch them on; otherwise they just slow the base solve down.
bool needs_inactive_rows(const std::vector<ScenarioSpec>& specs)
{
    for (const auto& s : specs) {
        if (!s.constraint_choices.empty()) {
            return true;
        }
        for (const auto& o : s.overrides) {
            if (o.ref.name == "min_renewable_share" || o.ref.name == "co2_cap") {
                return true;
            }
        }
    }
    return false;
}

RunResult run_on_instance(ModelInstance& inst, const std::shared_ptr<const LinearProgram>& lp,
                          const ScenarioSpec& spec, std::size_t index, const ScenarioBase& base,
                          const RunOptions& options)
{
    auto start = Clock::now();
    RunResult r;
    r.run_id = spec.run_id;
    r.index = index;
    r.program = lp;
    try {
        if (options.before_run) {
            options.before_run(index);
        }
        auto ex = expand_overrides(spec, *lp, base);
        r.inputs = std::move(ex.inputs);
        r.deltas = std::move(ex.deltas);
        r.excluded_columns = std::move(ex.excluded_columns);
        r.excluded_rows = std::move(ex.excluded_rows);
        inst.reset_to_base();
        r.solution = inst.update_and_resolve(r.deltas);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.wall_seconds = since(start);
    return r;
}

} // namespace

std::vector<RunResult> run_scenarios(const std::vector<ScenarioSpec>& specs, const ScenarioBase& base,
                                     const RunOptions& options)
{
    std::vector<RunResult> results(specs.size());
    if (specs.empty()) {
        return results;
    }
    if (options.mode == RunMode::rebuild) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            results[i] = run_rebuild(specs[i], i, base, options);
        }
        return results;
    }

    // Shared base: every node, inactive policy rows kept when scenarios may
    // switch them by rhs.
    std::shared_ptr<const LinearProgram> lp;
    std::unique_ptr<ModelInstance> root;
    try {
        BuildOptions bo;
        bo.choices = base.choices;
        bo.keep_inactive_rows = needs_inactive_rows(specs);
        bo.directional_lines = lines_needing_direction(specs, base.data);
        lp = std::make_shared<const LinearProgram>(build_model(base.data, base.config, base.features, bo));
        root = SimplexBackend(options.solver).compile(*lp);
        root->solve();
        root->snapshot_base();
    } catch (const std::exception& e) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            results[i] = failed(specs[i], i, e);
        }
        return results;
    }

    std::size_t threads = options.mode == RunMode::parallel ? options.threads : 1;
    std::size_t workers = std::min(resolve_threads(threads), specs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            results[i] = run_on_instance(*root, lp, specs[i], i, base, options);
        }
        return results;
    }
    // Clones are made up front: the root is not touched concurrently.
    std::vector<std::unique_ptr<ModelInstance>> instances;
    for (std::size_t w = 0; w < workers; ++w) {
        instances.push_back(root->clone());
    }
    for_each_index_partitioned(
        specs.size(), workers, [&](std::size_t w) { return instances[w].get(); },
        [&](ModelInstance* inst, std::size_t i) {
            results[i] = run_on_instance(*inst, lp, specs[i], i, base, options);
        });
    return results;
}

} // namespace voltaic
