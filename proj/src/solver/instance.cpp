#include "simplex_core.hpp"

#include "voltaic/common/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/core.h>
#include <unordered_map>

namespace voltaic {

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::unbounded:
        return "unbounded";
    case SolveStatus::iteration_limit:
        return "iteration_limit";
    case SolveStatus::numerical_error:
        break;
    }
    return "numerical_error";
}

namespace {

double power_of_two(double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        return 1.0;
    }
    return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v))));
}

class SimplexInstance final : public ModelInstance {
public:
    SimplexInstance(const LinearProgram& lp, const SolverOptions& options);

    Solution solve() override;
    void apply(const std::vector<LpUpdate>& updates) override;
    void snapshot_base() override;
    void reset_to_base() override;
    LinearProgram current_program() const override;
    const LinearProgram& structure() const override { return *lp_; }
    std::unique_ptr<ModelInstance> clone() const override;

private:
    SimplexInstance(const SimplexInstance& other);

    struct Values {
        std::vector<double> cost;
        std::vector<double> lower;
        std::vector<double> upper;
        std::vector<double> rhs;
        std::vector<double> coef; // column-compressed order
    };
    struct Basis {
        std::vector<int> head;
        std::vector<detail::VarState> state;
        bool has_basis = false;
    };

    void compute_scaling();
    void load_core();
    std::pair<double, double> row_bounds(int i) const;

    std::shared_ptr<const LinearProgram> lp_;
    SolverOptions options_;
    int m_ = 0;
    int n_ = 0;
    std::vector<int> col_start_;
    std::vector<int> row_index_;
    std::unordered_map<long long, int> slot_;
    Values values_;
    Values base_values_;
    Basis base_basis_;
    bool has_base_ = false;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
    double obj_scale_ = 1.0;
    detail::SimplexCore core_;
};

long long slot_key(int row, int col)
{
    return (static_cast<long long>(col) << 32) | static_cast<unsigned>(row);
}

SimplexInstance::SimplexInstance(const LinearProgram& lp, const SolverOptions& options)
    : lp_(std::make_shared<const LinearProgram>(lp)), options_(options), core_(options)
{
    lp_->validate();
    m_ = static_cast<int>(lp.num_rows());
    n_ = static_cast<int>(lp.num_columns());

    // Column-compressed copy; duplicate (row, col) triplets are summed.
    std::vector<Coefficient> sorted = lp.coefficients();
    std::stable_sort(sorted.begin(), sorted.end(), [](const Coefficient& a, const Coefficient& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& c : sorted) {
        auto it = slot_.find(slot_key(c.row, c.col));
        if (it != slot_.end()) {
            values_.coef[it->second] += c.value;
            continue;
        }
        slot_.emplace(slot_key(c.row, c.col), static_cast<int>(row_index_.size()));
        row_index_.push_back(c.row);
        values_.coef.push_back(c.value);
        ++col_start_[c.col + 1];
    }
    for (int j = 0; j < n_; ++j) {
        col_start_[j + 1] += col_start_[j];
    }

    for (const auto& c : lp.columns()) {
        values_.cost.push_back(c.cost);
        values_.lower.push_back(c.lower);
        values_.upper.push_back(c.upper);
    }
    for (const auto& r : lp.rows()) {
        values_.rhs.push_back(r.rhs);
    }
    compute_scaling();
}

// Geometric-mean scaling passes, rounded to powers of two so that scaling
// and unscaling are exact in floating point.
void SimplexInstance::compute_scaling()
{
    row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
    col_scale_.assign(static_cast<std::size_t>(n_), 1.0);
    if (!options_.scale) {
        obj_scale_ = 1.0;
        return;
    }
    std::vector<double> rmin(m_), rmax(m_);
    for (int pass = 0; pass < 6; ++pass) {
        std::fill(rmin.begin(), rmin.end(), infinity);
        std::fill(rmax.begin(), rmax.end(), 0.0);
        for (int j = 0; j < n_; ++j) {
            for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
                double a = std::abs(values_.coef[p]) * col_scale_[j];
                if (a == 0.0) {
                    continue;
                }
                int i = row_index_[p];
                rmin[i] = std::min(rmin[i], a);
                rmax[i] = std::max(rmax[i], a);
            }
        }
        for (int i = 0; i < m_; ++i) {
            row_scale_[i] = rmax[i] > 0.0 ? 1.0 / std::sqrt(rmin[i] * rmax[i]) : 1.0;
        }
        for (int j = 0; j < n_; ++j) {
            double lo = infinity;
            double hi = 0.0;
            for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
                double a = std::abs(values_.coef[p]) * row_scale_[row_index_[p]];
                if (a == 0.0) {
                    continue;
                }
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
            col_scale_[j] = hi > 0.0 ? 1.0 / std::sqrt(lo * hi) : 1.0;
        }
    }
    for (auto& r : row_scale_) {
        r = power_of_two(r);
    }
    for (auto& c : col_scale_) {
        c = power_of_two(c);
    }
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
        cmax = std::max(cmax, std::abs(values_.cost[j] * col_scale_[j]));
    }
    obj_scale_ = cmax > 0.0 ? power_of_two(1.0 / cmax) : 1.0;
}

std::pair<double, double> SimplexInstance::row_bounds(int i) const
{
    double rhs = values_.rhs[i];
    switch (lp_->rows()[i].sense) {
    case RowSense::le:
        return {-infinity, rhs};
    case RowSense::ge:
        return {rhs, infinity};
    case RowSense::eq:
        break;
    }
    return {rhs, rhs};
}

void SimplexInstance::load_core()
{
    auto& c = core_;
    c.m = m_;
    c.n = n_;
    c.col_start = col_start_;
    c.row_index = row_index_;
    c.value.resize(values_.coef.size());
    for (int j = 0; j < n_; ++j) {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
            c.value[p] = row_scale_[row_index_[p]] * values_.coef[p] * col_scale_[j];
        }
    }
    std::size_t total = static_cast<std::size_t>(n_ + m_);
    c.cost.assign(total, 0.0);
    c.lower.assign(total, 0.0);
    c.upper.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
        c.cost[j] = values_.cost[j] * col_scale_[j] * obj_scale_;
        c.lower[j] = values_.lower[j] / col_scale_[j];
        c.upper[j] = values_.upper[j] / col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) {
        auto [lo, hi] = row_bounds(i);
        c.lower[n_ + i] = lo * row_scale_[i];
        c.upper[n_ + i] = hi * row_scale_[i];
    }
    if (c.has_basis && (c.state.size() != total || c.head.size() != static_cast<std::size_t>(m_))) {
        c.has_basis = false;
    }
    if (!c.has_basis) {
        c.crash_slack_basis();
    }
    c.x.resize(total, 0.0);
}

Solution SimplexInstance::solve()
{
    auto start = std::chrono::steady_clock::now();
    Solution sol;
    sol.stats.warm_start = core_.has_basis;
    load_core();
    auto result = core_.run();
    if (result.status == SolveStatus::numerical_error && sol.stats.warm_start) {
        core_.crash_slack_basis();
        auto retry = core_.run();
        retry.iterations += result.iterations;
        retry.refactorizations += result.refactorizations;
        result = retry;
        sol.stats.warm_start = false;
    }

    sol.status = result.status;
    sol.message = result.message;
    sol.stats.iterations = result.iterations;
    sol.stats.refactorizations = result.refactorizations;

    sol.primal.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        double v = core_.x[j] * col_scale_[j];
        // Snap to a bound hit within tolerance so reported levels are clean.
        const double tol = 1e-9 * std::max(1.0, std::abs(v));
        if (std::abs(v - values_.lower[j]) <= tol) {
            v = values_.lower[j];
        } else if (std::abs(v - values_.upper[j]) <= tol) {
            v = values_.upper[j];
        }
        sol.primal[j] = v == 0.0 ? 0.0 : v;
    }
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
        sol.objective += values_.cost[j] * sol.primal[j];
    }

    sol.dual.assign(static_cast<std::size_t>(m_), 0.0);
    sol.reduced_cost.assign(static_cast<std::size_t>(n_), 0.0);
    if (sol.status == SolveStatus::optimal && m_ > 0) {
        auto y = core_.duals();
        auto d = core_.reduced_costs(y);
        for (int i = 0; i < m_; ++i) {
            double v = y[i] * row_scale_[i] / obj_scale_;
            sol.dual[i] = v == 0.0 ? 0.0 : v;
        }
        for (int j = 0; j < n_; ++j) {
            double v = d[j] / (col_scale_[j] * obj_scale_);
            sol.reduced_cost[j] = v == 0.0 ? 0.0 : v;
        }
    } else if (sol.status == SolveStatus::optimal) {
        for (int j = 0; j < n_; ++j) {
            sol.reduced_cost[j] = values_.cost[j];
        }
    }
    sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

void SimplexInstance::apply(const std::vector<LpUpdate>& updates)
{
    Values staged = values_;
    std::vector<int> touched;
    for (const auto& u : updates) {
        bool col_ok = u.col >= 0 && u.col < n_;
        bool row_ok = u.row >= 0 && u.row < m_;
        switch (u.kind) {
        case LpUpdate::Kind::column_lower:
        case LpUpdate::Kind::column_upper:
            if (!col_ok) {
                throw SolveError(fmt::format("bound update on unknown column {}", u.col));
            }
            (u.kind == LpUpdate::Kind::column_lower ? staged.lower : staged.upper)[u.col] = u.value;
            touched.push_back(u.col);
            break;
        case LpUpdate::Kind::objective:
            if (!col_ok) {
                throw SolveError(fmt::format("objective update on unknown column {}", u.col));
            }
            staged.cost[u.col] = u.value;
            break;
        case LpUpdate::Kind::row_rhs:
            if (!row_ok) {
                throw SolveError(fmt::format("rhs update on unknown row {}", u.row));
            }
            if (lp_->rows()[u.row].sense == RowSense::eq && std::isinf(u.value)) {
                throw SolveError("infinite rhs on equality row " +
                                 LinearProgram::key(lp_->rows()[u.row].name, lp_->rows()[u.row].domain));
            }
            staged.rhs[u.row] = u.value;
            break;
        case LpUpdate::Kind::coefficient: {
            auto it = slot_.find(slot_key(u.row, u.col));
            if (!row_ok || !col_ok || it == slot_.end()) {
                throw SolveError(fmt::format("coefficient update on unknown entry ({}, {})", u.row, u.col));
            }
            staged.coef[it->second] = u.value;
            break;
        }
        }
    }
    for (int j : touched) {
        if (!(staged.lower[j] <= staged.upper[j])) {
            const auto& c = lp_->columns()[j];
            throw SolveError(fmt::format("update leaves {} with lower {} > upper {}",
                                         LinearProgram::key(c.name, c.domain), staged.lower[j], staged.upper[j]));
        }
    }
    values_ = std::move(staged);
}

// The factorization is not copied; the clone refactors on its next solve.
SimplexInstance::SimplexInstance(const SimplexInstance& other)
    : lp_(other.lp_), options_(other.options_), m_(other.m_), n_(other.n_), col_start_(other.col_start_),
      row_index_(other.row_index_), slot_(other.slot_), values_(other.values_), base_values_(other.base_values_),
      base_basis_(other.base_basis_), has_base_(other.has_base_), row_scale_(other.row_scale_),
      col_scale_(other.col_scale_), obj_scale_(other.obj_scale_), core_(other.options_)
{
    core_.head = other.core_.head;
    core_.state = other.core_.state;
    core_.has_basis = other.core_.has_basis;
}

std::unique_ptr<ModelInstance> SimplexInstance::clone() const
{
    return std::unique_ptr<ModelInstance>(new SimplexInstance(*this));
}

void SimplexInstance::snapshot_base()
{
    base_values_ = values_;
    base_basis_ = Basis{core_.head, core_.state, core_.has_basis};
    has_base_ = true;
}

void SimplexInstance::reset_to_base()
{
    if (!has_base_) {
        throw SolveError("reset_to_base called before snapshot_base");
    }
    values_ = base_values_;
    core_.head = base_basis_.head;
    core_.state = base_basis_.state;
    core_.has_basis = base_basis_.has_basis;
}

LinearProgram SimplexInstance::current_program() const
{
    LinearProgram out = *lp_;
    for (int j = 0; j < n_; ++j) {
        out.set_bounds(j, values_.lower[j], values_.upper[j]);
        out.set_cost(j, values_.cost[j]);
    }
    for (int i = 0; i < m_; ++i) {
        out.set_rhs(i, values_.rhs[i]);
    }
    for (int j = 0; j < n_; ++j) {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
            out.set_coefficient(row_index_[p], j, values_.coef[p]);
        }
    }
    return out;
}

} // namespace

std::unique_ptr<ModelInstance> SimplexBackend::compile(const LinearProgram& lp) const
{
    return std::make_unique<SimplexInstance>(lp, options_);
}

Solution solve(const LinearProgram& lp, const SolverOptions& options)
{
    return SimplexBackend(options).solve(lp);
}

std::unique_ptr<ModelInstance> compile(const LinearProgram& lp, const SolverOptions& options)
{
    return SimplexBackend(options).compile(lp);
}

Solution update_and_resolve(ModelInstance& instance, const std::vector<LpUpdate>& updates)
{
    return instance.update_and_resolve(updates);
}

} // namespace voltaic
