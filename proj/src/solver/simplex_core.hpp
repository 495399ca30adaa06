#pragma once

#include "voltaic/solver/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <string>
#include <vector>

namespace voltaic::detail {

enum class VarState : unsigned char { basic, at_lower, at_upper, free_zero };

/// Bounded primal simplex on  [A  -I] (x, r) = 0,  lower <= (x, r) <= upper.
/// Structural columns 0..n-1 come from A (column-compressed); column n+i is
/// the logical of row i, whose bounds carry the row's rhs. All data here is
/// already scaled.
class SimplexCore {
public:
    explicit SimplexCore(const SolverOptions& options) : options_(options) {}

    int m = 0;
    int n = 0;
    std::vector<int> col_start; // size n+1
    std::vector<int> row_index;
    std::vector<double> value;

    std::vector<double> cost;  // size n+m, logical costs are zero
    std::vector<double> lower; // size n+m
    std::vector<double> upper; // size n+m

    std::vector<int> head;        // basic variable per basis position
    std::vector<VarState> state;  // size n+m
    std::vector<double> x;        // size n+m
    bool has_basis = false;

    struct Result {
        SolveStatus status = SolveStatus::numerical_error;
        std::size_t iterations = 0;
        std::size_t refactorizations = 0;
        std::string message;
    };

    Result run();

    void crash_slack_basis();
    /// Phase-2 duals y = B^-T c_B. Requires a valid factorization (run()
    /// leaves one behind).
    std::vector<double> duals();
    /// d_j = c_j - y^T a_j over all n+m variables.
    std::vector<double> reduced_costs(const std::vector<double>& y) const;

private:
    struct Eta {
        int pivot_row = 0;
        double pivot = 1.0;
        std::vector<int> index;
        std::vector<double> value;
    };

    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

    bool refactor();
    void ftran(Eigen::VectorXd& v) const;
    void btran(Eigen::VectorXd& v) const;
    void load_column(int j, Eigen::VectorXd& v) const;
    void compute_basic_values();
    void place_nonbasic(int j);
    double column_dot(int j, const Eigen::VectorXd& y) const;
    double infeasibility(int j) const;

    SolverOptions options_;
    mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    bool factor_ok_ = false;
    std::size_t refactor_count_ = 0;
};

} // namespace voltaic::detail
