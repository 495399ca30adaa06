#include "voltaic/solver/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>

namespace voltaic {

bool Certificate::ok(double tol) const
{
    return primal_residual <= tol && bound_violation <= tol && duality_gap <= tol && dual_infeasibility <= tol &&
           complementarity <= tol;
}

std::string Certificate::summary() const
{
    return fmt::format("primal {:.3g} bounds {:.3g} gap {:.3g} dual {:.3g} compl {:.3g}", primal_residual,
                       bound_violation, duality_gap, dual_infeasibility, complementarity);
}

Certificate verify(const LinearProgram& lp, const Solution& sol)
{
    Certificate cert;
    const auto& cols = lp.columns();
    const auto& rows = lp.rows();
    const auto& x = sol.primal;
    if (x.size() != cols.size()) {
        cert.primal_residual = infinity;
        return cert;
    }
    const double primal_obj = lp.evaluate_objective(x);
    const double obj_norm = std::max(1.0, std::abs(primal_obj));

    auto activity = lp.row_activity(x);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (std::isinf(r.rhs)) {
            continue;
        }
        double v = activity[i] - r.rhs;
        double viol = r.sense == RowSense::le ? std::max(0.0, v) : r.sense == RowSense::ge ? std::max(0.0, -v) : std::abs(v);
        cert.primal_residual = std::max(cert.primal_residual, viol / std::max(1.0, std::abs(r.rhs)));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        double viol = std::max(cols[j].lower - x[j], x[j] - cols[j].upper);
        cert.bound_violation = std::max(cert.bound_violation, std::max(0.0, viol) / std::max(1.0, std::abs(x[j])));
    }

    if (!sol.optimal() || sol.dual.size() != rows.size()) {
        return cert;
    }

    const auto& y = sol.dual;
    double cost_norm = 1.0;
    std::vector<double> d(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        d[j] = cols[j].cost;
        cost_norm = std::max(cost_norm, std::abs(cols[j].cost));
    }
    for (const auto& c : lp.coefficients()) {
        d[c.col] -= c.value * y[c.row];
    }

    double dual_obj = 0.0;
    double compl_sum = 0.0;
    double dual_inf = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (y[i] == 0.0) {
            continue;
        }
        if (std::isinf(r.rhs)) {
            dual_inf = std::max(dual_inf, std::abs(y[i]));
            continue;
        }
        if (r.sense == RowSense::le) {
            dual_inf = std::max(dual_inf, y[i]);
        } else if (r.sense == RowSense::ge) {
            dual_inf = std::max(dual_inf, -y[i]);
        }
        dual_obj += y[i] * r.rhs;
        compl_sum += std::abs(y[i] * (activity[i] - r.rhs));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const double dj = d[j];
        if (dj > 0.0) {
            if (std::isinf(cols[j].lower)) {
                dual_inf = std::max(dual_inf, dj);
            } else {
                dual_obj += dj * cols[j].lower;
                compl_sum += dj * std::abs(x[j] - cols[j].lower);
            }
        } else if (dj < 0.0) {
            if (std::isinf(cols[j].upper)) {
                dual_inf = std::max(dual_inf, -dj);
            } else {
                dual_obj += dj * cols[j].upper;
                compl_sum += -dj * std::abs(cols[j].upper - x[j]);
            }
        }
    }
    cert.dual_objective = dual_obj;
    cert.duality_gap = std::abs(primal_obj - dual_obj) / obj_norm;
    cert.dual_infeasibility = dual_inf / cost_norm;
    cert.complementarity = compl_sum / obj_norm;
    return cert;
}

} // namespace voltaic
