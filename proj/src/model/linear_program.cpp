#include "voltaic/model/linear_program.hpp"

#include "voltaic/common/error.hpp"

#include <cmath>
#include <fmt/core.h>

namespace voltaic {

char sense_symbol(RowSense sense)
{
    switch (sense) {
    case RowSense::le:
        return 'L';
    case RowSense::ge:
        return 'G';
    case RowSense::eq:
        break;
    }
    return 'E';
}

std::string LinearProgram::key(const std::string& name, const Tuple& domain)
{
    std::string k = name;
    k.push_back('(');
    k += join(domain, ",");
    k.push_back(')');
    return k;
}

void LinearProgram::declare_symbol(const std::string& name, SymbolClass cls,
                                   std::vector<std::string> dims, std::string unit)
{
    symbols_[name] = SymbolInfo{cls, std::move(dims), std::move(unit)};
}

int LinearProgram::add_column(const std::string& name, Tuple domain, double lower, double upper,
                              double cost)
{
    auto k = key(name, domain);
    if (column_index_.count(k)) {
        throw std::logic_error("duplicate column " + k);
    }
    if (!(lower <= upper)) {
        throw std::logic_error(fmt::format("column {} has lower {} > upper {}", k, lower, upper));
    }
    int index = static_cast<int>(columns_.size());
    columns_.push_back(Column{name, std::move(domain), lower, upper, cost});
    column_index_.emplace(std::move(k), index);
    columns_by_name_[name].push_back(index);
    return index;
}

int LinearProgram::add_row(const std::string& name, Tuple domain, RowSense sense, double rhs)
{
    auto k = key(name, domain);
    if (row_index_.count(k)) {
        throw std::logic_error("duplicate row " + k);
    }
    int index = static_cast<int>(rows_.size());
    rows_.push_back(Row{name, std::move(domain), sense, rhs});
    row_index_.emplace(std::move(k), index);
    rows_by_name_[name].push_back(index);
    return index;
}

void LinearProgram::add_coefficient(int row, int col, double value)
{
    if (row < 0 || row >= static_cast<int>(rows_.size()) || col < 0 ||
        col >= static_cast<int>(columns_.size())) {
        throw std::logic_error(fmt::format("coefficient ({}, {}) out of range", row, col));
    }
    coefficients_.push_back(Coefficient{row, col, value});
    slots_valid_ = false;
}

std::optional<int> LinearProgram::find_column(const std::string& name, const Tuple& domain) const
{
    auto it = column_index_.find(key(name, domain));
    if (it == column_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<int> LinearProgram::find_row(const std::string& name, const Tuple& domain) const
{
    auto it = row_index_.find(key(name, domain));
    if (it == row_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::vector<int>& LinearProgram::columns_of(const std::string& name) const
{
    static const std::vector<int> empty;
    auto it = columns_by_name_.find(name);
    return it == columns_by_name_.end() ? empty : it->second;
}

const std::vector<int>& LinearProgram::rows_of(const std::string& name) const
{
    static const std::vector<int> empty;
    auto it = rows_by_name_.find(name);
    return it == rows_by_name_.end() ? empty : it->second;
}

const SymbolInfo* LinearProgram::symbol(const std::string& name) const
{
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : &it->second;
}

void LinearProgram::set_bounds(int col, double lower, double upper)
{
    if (col < 0 || col >= static_cast<int>(columns_.size())) {
        throw SolveError(fmt::format("unknown column index {}", col));
    }
    if (!(lower <= upper)) {
        throw SolveError(fmt::format("bounds on {} would have lower {} > upper {}",
                                     key(columns_[col].name, columns_[col].domain), lower, upper));
    }
    columns_[col].lower = lower;
    columns_[col].upper = upper;
}

void LinearProgram::set_cost(int col, double cost)
{
    if (col < 0 || col >= static_cast<int>(columns_.size())) {
        throw SolveError(fmt::format("unknown column index {}", col));
    }
    columns_[col].cost = cost;
}

void LinearProgram::set_rhs(int row, double rhs)
{
    if (row < 0 || row >= static_cast<int>(rows_.size())) {
        throw SolveError(fmt::format("unknown row index {}", row));
    }
    rows_[row].rhs = rhs;
}

std::size_t LinearProgram::slot_of(int row, int col) const
{
    if (!slots_valid_) {
        coefficient_slots_.clear();
        for (std::size_t k = 0; k < coefficients_.size(); ++k) {
            const auto& c = coefficients_[k];
            coefficient_slots_[(static_cast<long long>(c.row) << 32) | static_cast<unsigned>(c.col)] = k;
        }
        slots_valid_ = true;
    }
    auto it = coefficient_slots_.find((static_cast<long long>(row) << 32) | static_cast<unsigned>(col));
    if (it == coefficient_slots_.end()) {
        throw SolveError(fmt::format("no coefficient slot at row {} column {}", row, col));
    }
    return it->second;
}

void LinearProgram::set_coefficient(int row, int col, double value)
{
    coefficients_[slot_of(row, col)].value = value;
}

void LinearProgram::apply(const std::vector<LpUpdate>& updates)
{
    // Bound pairs are checked after the whole batch so that a pair can be
    // moved past its old interval in either order.
    std::vector<int> touched;
    for (const auto& u : updates) {
        switch (u.kind) {
        case LpUpdate::Kind::column_lower:
        case LpUpdate::Kind::column_upper:
            if (u.col < 0 || u.col >= static_cast<int>(columns_.size())) {
                throw SolveError(fmt::format("unknown column index {}", u.col));
            }
            (u.kind == LpUpdate::Kind::column_lower ? columns_[u.col].lower : columns_[u.col].upper) = u.value;
            touched.push_back(u.col);
            break;
        case LpUpdate::Kind::objective:
            set_cost(u.col, u.value);
            break;
        case LpUpdate::Kind::row_rhs:
            set_rhs(u.row, u.value);
            break;
        case LpUpdate::Kind::coefficient:
            set_coefficient(u.row, u.col, u.value);
            break;
        }
    }
    for (int j : touched) {
        const auto& c = columns_[j];
        if (!(c.lower <= c.upper)) {
            throw SolveError(fmt::format("bounds on {} would have lower {} > upper {}", key(c.name, c.domain),
                                         c.lower, c.upper));
        }
    }
}

double LinearProgram::evaluate_objective(const std::vector<double>& x) const
{
    double total = 0.0;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        total += columns_[j].cost * x[j];
    }
    return total;
}

std::vector<double> LinearProgram::row_activity(const std::vector<double>& x) const
{
    std::vector<double> activity(rows_.size(), 0.0);
    for (const auto& c : coefficients_) {
        activity[c.row] += c.value * x[c.col];
    }
    return activity;
}

void LinearProgram::validate() const
{
    for (const auto& c : coefficients_) {
        if (c.row < 0 || c.row >= static_cast<int>(rows_.size()) || c.col < 0 ||
            c.col >= static_cast<int>(columns_.size())) {
            throw ValidationError(fmt::format("triplet ({}, {}) references a missing row or column", c.row, c.col));
        }
        if (!std::isfinite(c.value)) {
            throw ValidationError("non-finite coefficient in " + key(rows_[c.row].name, rows_[c.row].domain));
        }
    }
    for (const auto& col : columns_) {
        if (!(col.lower <= col.upper) || col.lower == infinity || col.upper == -infinity) {
            throw ValidationError("invalid bounds on " + key(col.name, col.domain));
        }
        if (!std::isfinite(col.cost)) {
            throw ValidationError("non-finite cost on " + key(col.name, col.domain));
        }
    }
    for (const auto& row : rows_) {
        bool impossible = (row.sense == RowSense::eq && std::isinf(row.rhs)) ||
                          (row.sense == RowSense::le && row.rhs == -infinity) ||
                          (row.sense == RowSense::ge && row.rhs == infinity);
        if (std::isnan(row.rhs) || impossible) {
            throw ValidationError("invalid rhs on " + key(row.name, row.domain));
        }
    }
}

} // namespace voltaic
