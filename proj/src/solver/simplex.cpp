#include "simplex_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voltaic::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

void SimplexCore::crash_slack_basis()
{
    head.resize(static_cast<std::size_t>(m));
    state.assign(static_cast<std::size_t>(n + m), VarState::at_lower);
    x.assign(static_cast<std::size_t>(n + m), 0.0);
    for (int i = 0; i < m; ++i) {
        head[i] = n + i;
        state[n + i] = VarState::basic;
    }
    for (int j = 0; j < n; ++j) {
        place_nonbasic(j);
    }
    etas_.clear();
    factor_ok_ = false;
    has_basis = true;
}

void SimplexCore::place_nonbasic(int j)
{
    double lo = lower[j];
    double hi = upper[j];
    if (lo == -kInf && hi == kInf) {
        state[j] = VarState::free_zero;
        x[j] = 0.0;
    } else if (state[j] == VarState::at_upper && hi < kInf) {
        x[j] = hi;
    } else if (lo > -kInf) {
        state[j] = VarState::at_lower;
        x[j] = lo;
    } else {
        state[j] = VarState::at_upper;
        x[j] = hi;
    }
}

bool SimplexCore::refactor()
{
    etas_.clear();
    ++refactor_count_;
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(static_cast<std::size_t>(m) * 3);
    for (int k = 0; k < m; ++k) {
        int j = head[k];
        if (j < n) {
            for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
                if (value[p] != 0.0) {
                    triplets.emplace_back(row_index[p], k, value[p]);
                }
            }
        } else {
            triplets.emplace_back(j - n, k, -1.0);
        }
    }
    SpMat basis(m, m);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    factor_ok_ = lu_.info() == Eigen::Success;
    if (factor_ok_) {
        double logdet = lu_.logAbsDeterminant();
        factor_ok_ = std::isfinite(logdet);
    }
    return factor_ok_;
}

void SimplexCore::ftran(Eigen::VectorXd& v) const
{
    v = lu_.solve(v);
    for (const auto& eta : etas_) {
        double vp = v[eta.pivot_row] / eta.pivot;
        v[eta.pivot_row] = vp;
        if (vp != 0.0) {
            for (std::size_t k = 0; k < eta.index.size(); ++k) {
                v[eta.index[k]] -= eta.value[k] * vp;
            }
        }
    }
}

void SimplexCore::btran(Eigen::VectorXd& v) const
{
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double sum = v[it->pivot_row];
        for (std::size_t k = 0; k < it->index.size(); ++k) {
            sum -= it->value[k] * v[it->index[k]];
        }
        v[it->pivot_row] = sum / it->pivot;
    }
    v = lu_.transpose().solve(v);
}

void SimplexCore::load_column(int j, Eigen::VectorXd& v) const
{
    v.setZero(m);
    if (j < n) {
        for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
            v[row_index[p]] += value[p];
        }
    } else {
        v[j - n] = -1.0;
    }
}

double SimplexCore::column_dot(int j, const Eigen::VectorXd& y) const
{
    if (j >= n) {
        return -y[j - n];
    }
    double sum = 0.0;
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
        sum += value[p] * y[row_index[p]];
    }
    return sum;
}

void SimplexCore::compute_basic_values()
{
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < n + m; ++j) {
        if (state[j] == VarState::basic || x[j] == 0.0) {
            continue;
        }
        if (j < n) {
            for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
                rhs[row_index[p]] -= value[p] * x[j];
            }
        } else {
            rhs[j - n] += x[j];
        }
    }
    ftran(rhs);
    for (int k = 0; k < m; ++k) {
        x[head[k]] = rhs[k];
    }
}

double SimplexCore::infeasibility(int j) const
{
    if (x[j] < lower[j]) {
        return lower[j] - x[j];
    }
    if (x[j] > upper[j]) {
        return x[j] - upper[j];
    }
    return 0.0;
}

std::vector<double> SimplexCore::duals()
{
    Eigen::VectorXd cb(m);
    for (int k = 0; k < m; ++k) {
        cb[k] = cost[head[k]];
    }
    btran(cb);
    return std::vector<double>(cb.data(), cb.data() + m);
}

std::vector<double> SimplexCore::reduced_costs(const std::vector<double>& y) const
{
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), m);
    std::vector<double> d(static_cast<std::size_t>(n + m));
    for (int j = 0; j < n + m; ++j) {
        d[j] = cost[j] - column_dot(j, ym);
    }
    return d;
}

SimplexCore::Result SimplexCore::run()
{
    Result result;
    refactor_count_ = 0;
    const double ptol = options_.primal_tolerance;
    const double dtol = options_.dual_tolerance;
    const std::size_t max_iter =
        options_.max_iterations > 0 ? options_.max_iterations
                                    : std::max<std::size_t>(50000, 50 * static_cast<std::size_t>(n + m));

    if (m == 0) {
        // No rows: every column sits at its cheapest bound.
        for (int j = 0; j < n; ++j) {
            if (cost[j] > 0.0) {
                x[j] = lower[j];
            } else if (cost[j] < 0.0) {
                x[j] = upper[j];
            } else {
                x[j] = lower[j] > -kInf ? lower[j] : (upper[j] < kInf ? upper[j] : 0.0);
            }
            if (!std::isfinite(x[j])) {
                result.status = SolveStatus::unbounded;
                result.message = "objective unbounded along a free column";
                return result;
            }
        }
        result.status = SolveStatus::optimal;
        return result;
    }

    if (!has_basis) {
        crash_slack_basis();
    }
    for (int j = 0; j < n + m; ++j) {
        if (state[j] != VarState::basic) {
            place_nonbasic(j);
        }
    }
    if (!refactor()) {
        // A warm basis can turn singular after coefficient updates.
        crash_slack_basis();
        if (!refactor()) {
            result.status = SolveStatus::numerical_error;
            result.message = "slack basis could not be factorized";
            return result;
        }
    }
    compute_basic_values();

    Eigen::VectorXd y(m);
    Eigen::VectorXd alpha(m);
    std::vector<double> phase_cost(static_cast<std::size_t>(m));
    bool fresh = true;
    bool bland = false;
    std::size_t degenerate_streak = 0;

    while (true) {
        if (result.iterations >= max_iter) {
            result.status = SolveStatus::iteration_limit;
            result.message = "iteration limit reached";
            break;
        }
        if (etas_.size() >= options_.refactor_interval) {
            if (!refactor()) {
                result.status = SolveStatus::numerical_error;
                result.message = "basis became singular during refactorization";
                break;
            }
            compute_basic_values();
        }

        // Phase selection: any basic variable outside its bounds puts us
        // in phase 1 with costs -1 / +1 on the violated side.
        bool phase_one = false;
        for (int k = 0; k < m; ++k) {
            int j = head[k];
            if (x[j] < lower[j] - ptol) {
                phase_cost[k] = -1.0;
                phase_one = true;
            } else if (x[j] > upper[j] + ptol) {
                phase_cost[k] = 1.0;
                phase_one = true;
            } else {
                phase_cost[k] = 0.0;
            }
        }
        for (int k = 0; k < m; ++k) {
            y[k] = phase_one ? phase_cost[k] : cost[head[k]];
        }
        btran(y);

        // Pricing.
        int entering = -1;
        double best = 0.0;
        double entering_d = 0.0;
        for (int j = 0; j < n + m; ++j) {
            VarState s = state[j];
            if (s == VarState::basic || lower[j] == upper[j]) {
                continue;
            }
            double d = (phase_one ? 0.0 : cost[j]) - column_dot(j, y);
            bool eligible = (s == VarState::at_lower && d < -dtol) || (s == VarState::at_upper && d > dtol) ||
                            (s == VarState::free_zero && std::abs(d) > dtol);
            if (!eligible) {
                continue;
            }
            if (bland) {
                entering = j;
                entering_d = d;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                entering = j;
                entering_d = d;
            }
        }

        if (entering < 0) {
            if (!fresh) {
                if (!refactor()) {
                    result.status = SolveStatus::numerical_error;
                    result.message = "basis became singular during refactorization";
                    break;
                }
                compute_basic_values();
                fresh = true;
                continue;
            }
            result.status = phase_one ? SolveStatus::infeasible : SolveStatus::optimal;
            if (phase_one) {
                result.message = "no feasible point: phase 1 stalled with positive infeasibility";
            }
            break;
        }

        const int q = entering;
        const double dir = entering_d < 0.0 ? 1.0 : -1.0;
        load_column(q, alpha);
        ftran(alpha);

        // Ratio test. Pass 1 bounds the step with tolerance-relaxed bounds
        // (Harris); pass 2 picks the largest pivot among the candidates.
        // Bland mode uses the plain minimum ratio with lowest-index ties.
        auto ratio_of = [&](int k, double slack_tol, bool& at_lower_bound) -> double {
            double a = alpha[k];
            if (std::abs(a) < options_.pivot_tolerance) {
                return kInf;
            }
            int j = head[k];
            double rate = -dir * a;
            double v = x[j];
            double lo = lower[j];
            double hi = upper[j];
            if (phase_one && v < lo - ptol) {
                if (rate > 0.0) {
                    at_lower_bound = true;
                    return (lo - v + slack_tol) / rate;
                }
                return kInf;
            }
            if (phase_one && v > hi + ptol) {
                if (rate < 0.0) {
                    at_lower_bound = false;
                    return (v - hi + slack_tol) / -rate;
                }
                return kInf;
            }
            if (rate < 0.0 && lo > -kInf) {
                at_lower_bound = true;
                return (v - lo + slack_tol) / -rate;
            }
            if (rate > 0.0 && hi < kInf) {
                at_lower_bound = false;
                return (hi - v + slack_tol) / rate;
            }
            return kInf;
        };

        double range = upper[q] - lower[q];
        int leave_pos = -1;
        bool leave_at_lower = true;
        double theta = kInf;

        if (bland) {
            for (int k = 0; k < m; ++k) {
                bool at_lo = true;
                double r = ratio_of(k, 0.0, at_lo);
                if (r == kInf) {
                    continue;
                }
                r = std::max(r, 0.0);
                if (r < theta || (r == theta && leave_pos >= 0 && head[k] < head[leave_pos])) {
                    theta = r;
                    leave_pos = k;
                    leave_at_lower = at_lo;
                }
            }
        } else {
            double theta_max = kInf;
            for (int k = 0; k < m; ++k) {
                bool at_lo = true;
                theta_max = std::min(theta_max, ratio_of(k, ptol, at_lo));
            }
            if (theta_max < kInf) {
                double best_pivot = 0.0;
                for (int k = 0; k < m; ++k) {
                    bool at_lo = true;
                    double r = ratio_of(k, 0.0, at_lo);
                    if (r > theta_max) {
                        continue;
                    }
                    double piv = std::abs(alpha[k]);
                    if (piv > best_pivot || (piv == best_pivot && leave_pos >= 0 && head[k] < head[leave_pos])) {
                        best_pivot = piv;
                        leave_pos = k;
                        leave_at_lower = at_lo;
                        theta = std::max(r, 0.0);
                    }
                }
            }
        }

        bool flip = range < kInf && (leave_pos < 0 || range <= theta);
        if (flip) {
            theta = range;
        }
        if (!flip && leave_pos < 0) {
            if (phase_one) {
                result.status = SolveStatus::numerical_error;
                result.message = "phase 1 found no blocking variable";
            } else {
                result.status = SolveStatus::unbounded;
                result.message = "objective unbounded below";
            }
            break;
        }

        ++result.iterations;
        fresh = false;
        if (theta <= 1e-12) {
            if (++degenerate_streak >= options_.bland_threshold) {
                bland = true;
            }
        } else {
            degenerate_streak = 0;
            bland = false;
        }

        if (theta != 0.0) {
            for (int k = 0; k < m; ++k) {
                if (alpha[k] != 0.0) {
                    x[head[k]] -= dir * theta * alpha[k];
                }
            }
        }

        if (flip) {
            if (dir > 0.0) {
                state[q] = VarState::at_upper;
                x[q] = upper[q];
            } else {
                state[q] = VarState::at_lower;
                x[q] = lower[q];
            }
            continue;
        }

        x[q] += dir * theta;
        int leaving = head[leave_pos];
        if (leave_at_lower) {
            state[leaving] = VarState::at_lower;
            x[leaving] = lower[leaving];
        } else {
            state[leaving] = VarState::at_upper;
            x[leaving] = upper[leaving];
        }
        head[leave_pos] = q;
        state[q] = VarState::basic;

        Eta eta;
        eta.pivot_row = leave_pos;
        eta.pivot = alpha[leave_pos];
        for (int k = 0; k < m; ++k) {
            if (k != leave_pos && alpha[k] != 0.0) {
                eta.index.push_back(k);
                eta.value.push_back(alpha[k]);
            }
        }
        etas_.push_back(std::move(eta));
    }

    result.refactorizations = refactor_count_;
    return result;
}

} // namespace voltaic::detail
