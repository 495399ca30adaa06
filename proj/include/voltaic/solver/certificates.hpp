#pragma once

#include "voltaic/model/linear_program.hpp"
#include "voltaic/solver/solver.hpp"

#include <string>

namespace voltaic {

/// Optimality evidence for one solution, recomputed from the original
/// (unscaled) program. Residuals are relative: row violations are divided
/// by max(1, |rhs|), gap and complementarity by max(1, |objective|).
struct Certificate {
    double primal_residual = 0.0;  // worst row violation
    double bound_violation = 0.0;  // worst column bound violation
    double duality_gap = 0.0;      // |c'x - dual objective|, bound duals included
    double dual_infeasibility = 0.0;
    double complementarity = 0.0;
    double dual_objective = 0.0;

    bool ok(double tol = 1e-6) const;
    std::string summary() const;
};

Certificate verify(const LinearProgram& lp, const Solution& solution);

} // namespace voltaic
