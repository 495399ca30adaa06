#pragma once

#include "voltaic/model/linear_program.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace voltaic {

enum class SolveStatus { optimal, infeasible, unbounded, numerical_error, iteration_limit };

std::string to_string(SolveStatus status);

struct SolveStats {
    std::size_t iterations = 0;
    std::size_t refactorizations = 0;
    double seconds = 0.0;
    bool warm_start = false;
};

/// Result of one solve, indexed like the LinearProgram it came from.
/// `dual` holds the row marginals (d objective / d rhs); `reduced_cost`
/// holds the column duals.
struct Solution {
    SolveStatus status = SolveStatus::numerical_error;
    double objective = 0.0;
    std::vector<double> primal;
    std::vector<double> dual;
    std::vector<double> reduced_cost;
    SolveStats stats;
    std::string message;

    bool optimal() const { return status == SolveStatus::optimal; }
};

struct SolverOptions {
    double primal_tolerance = 1e-9;
    double dual_tolerance = 1e-9;
    double pivot_tolerance = 1e-9;
    std::size_t refactor_interval = 64;
    /// 0 picks a limit from the problem size.
    std::size_t max_iterations = 0;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t bland_threshold = 50;
    bool scale = true;
};

/// A compiled, re-solvable program. Updates are applied in place and the
/// next solve warm-starts from the current basis. A base snapshot can be
/// taken and restored so independent scenarios share one compile.
class ModelInstance {
public:
    virtual ~ModelInstance() = default;

    virtual Solution solve() = 0;
    /// Throws SolveError on an unknown target or a bound pair left with
    /// lower > upper; the instance is unchanged in that case.
    virtual void apply(const std::vector<LpUpdate>& updates) = 0;
    virtual Solution update_and_resolve(const std::vector<LpUpdate>& updates)
    {
        apply(updates);
        return solve();
    }

    /// Records current values and basis as the base state.
    virtual void snapshot_base() = 0;
    /// Restores values and basis recorded by snapshot_base().
    virtual void reset_to_base() = 0;

    /// Program with all applied updates, for cross-checks and export.
    virtual LinearProgram current_program() const = 0;
    virtual const LinearProgram& structure() const = 0;

    /// Independent copy with the same values, basis and base snapshot.
    virtual std::unique_ptr<ModelInstance> clone() const = 0;
};

/// Pluggable solver backend: the scenario engine only talks to this.
class SolverBackend {
public:
    virtual ~SolverBackend() = default;
    virtual std::unique_ptr<ModelInstance> compile(const LinearProgram& lp) const = 0;
    virtual Solution solve(const LinearProgram& lp) const { return compile(lp)->solve(); }
};

/// Bounded revised simplex (two-phase, sum-of-infeasibilities phase 1,
/// Dantzig pricing with a Bland fallback, Harris ratio test) over a
/// sparse LU basis factorization with product-form updates.
class SimplexBackend final : public SolverBackend {
public:
    explicit SimplexBackend(SolverOptions options = {}) : options_(options) {}
    std::unique_ptr<ModelInstance> compile(const LinearProgram& lp) const override;

private:
    SolverOptions options_;
};

Solution solve(const LinearProgram& lp, const SolverOptions& options = {});
std::unique_ptr<ModelInstance> compile(const LinearProgram& lp, const SolverOptions& options = {});
Solution update_and_resolve(ModelInstance& instance, const std::vector<LpUpdate>& updates);

} // namespace voltaic
