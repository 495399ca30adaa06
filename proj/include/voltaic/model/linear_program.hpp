#pragma once

#include "voltaic/common/strings.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace voltaic {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };

char sense_symbol(RowSense sense);

enum class SymbolClass { variable, equation };

/// Declared shape of a named family of columns or rows.
struct SymbolInfo {
    SymbolClass cls = SymbolClass::variable;
    std::vector<std::string> dims; // set names, e.g. {"tech","n","h"}
    std::string unit;
};

struct Column {
    std::string name;
    Tuple domain;
    double lower = 0.0;
    double upper = infinity;
    double cost = 0.0;
};

struct Row {
    std::string name;
    Tuple domain;
    RowSense sense = RowSense::eq;
    double rhs = 0.0; // +/-inf on an inequality deactivates the row
};

struct Coefficient {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Single-value change to a compiled program.
struct LpUpdate {
    enum class Kind { column_lower, column_upper, objective, row_rhs, coefficient };
    Kind kind = Kind::objective;
    int col = -1;
    int row = -1;
    double value = 0.0;

    static LpUpdate lower(int col, double v) { return {Kind::column_lower, col, -1, v}; }
    static LpUpdate upper(int col, double v) { return {Kind::column_upper, col, -1, v}; }
    static LpUpdate cost(int col, double v) { return {Kind::objective, col, -1, v}; }
    static LpUpdate rhs(int row, double v) { return {Kind::row_rhs, -1, row, v}; }
    static LpUpdate coefficient(int row, int col, double v) { return {Kind::coefficient, col, row, v}; }
};

/// Compiled minimization problem: columns, rows and sparse triplets, with a
/// (name, domain) -> index registry for both.
class LinearProgram {
public:
    void declare_symbol(const std::string& name, SymbolClass cls, std::vector<std::string> dims,
                        std::string unit = {});

    int add_column(const std::string& name, Tuple domain, double lower, double upper, double cost);
    int add_row(const std::string& name, Tuple domain, RowSense sense, double rhs);
    /// Explicit zeros are kept so that later coefficient updates find the slot.
    void add_coefficient(int row, int col, double value);

    std::optional<int> find_column(const std::string& name, const Tuple& domain) const;
    std::optional<int> find_row(const std::string& name, const Tuple& domain) const;
    const std::vector<int>& columns_of(const std::string& name) const;
    const std::vector<int>& rows_of(const std::string& name) const;
    const SymbolInfo* symbol(const std::string& name) const;
    const std::map<std::string, SymbolInfo>& symbols() const { return symbols_; }

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<Coefficient>& coefficients() const { return coefficients_; }
    std::size_t num_columns() const { return columns_.size(); }
    std::size_t num_rows() const { return rows_.size(); }

    void set_bounds(int col, double lower, double upper);
    void set_cost(int col, double cost);
    void set_rhs(int row, double rhs);
    void set_coefficient(int row, int col, double value);

    /// Applies updates in order. Throws on unknown targets or lo > hi.
    void apply(const std::vector<LpUpdate>& updates);

    /// Σ cost·x.
    double evaluate_objective(const std::vector<double>& x) const;
    /// Row activities A·x.
    std::vector<double> row_activity(const std::vector<double>& x) const;

    /// Checks the structural invariants (indices, bounds, unique keys).
    void validate() const;

    static std::string key(const std::string& name, const Tuple& domain);

private:
    std::vector<Column> columns_;
    std::vector<Row> rows_;
    std::vector<Coefficient> coefficients_;
    std::unordered_map<std::string, int> column_index_;
    std::unordered_map<std::string, int> row_index_;
    std::map<std::string, std::vector<int>> columns_by_name_;
    std::map<std::string, std::vector<int>> rows_by_name_;
    std::map<std::string, SymbolInfo> symbols_;
    // (row, col) -> triplet position, built lazily for coefficient updates.
    mutable std::unordered_map<long long, std::size_t> coefficient_slots_;
    mutable bool slots_valid_ = false;
    std::size_t slot_of(int row, int col) const;
};

} // namespace voltaic
