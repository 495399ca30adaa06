#include "voltaic/solver/mps.hpp"

#include "voltaic/common/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <string>
#include <vector>

namespace voltaic {

namespace {

// Value field is 12 characters wide; use as many digits as fit.
std::string mps_number(double v)
{
    for (int digits = 12; digits > 1; --digits) {
        std::string s = fmt::format("{:.{}g}", v, digits);
        if (s.size() <= 12) {
            return s;
        }
    }
    return fmt::format("{:.1e}", v);
}

std::string column_name(std::size_t j) { return fmt::format("C{:07d}", j + 1); }
std::string row_name(std::size_t i) { return fmt::format("R{:07d}", i + 1); }

// Fields start at 2, 5, 15, 25, 40, 50 (1-based).
std::string record(std::string_view type, std::string_view f1, std::string_view f2, const std::string& v2,
                   std::string_view f3 = {}, const std::string& v3 = {})
{
    std::string line = fmt::format(" {:<2} {:<8}  {:<8}  {:>12}", type, f1, f2, v2);
    if (!f3.empty()) {
        line += fmt::format("   {:<8}  {:>12}", f3, v3);
    }
    while (!line.empty() && line.back() == ' ') {
        line.pop_back();
    }
    return line + '\n';
}

} // namespace

std::string to_mps(const LinearProgram& lp, const std::string& name)
{
    const auto& cols = lp.columns();
    const auto& rows = lp.rows();
    std::string out;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out += fmt::format("* {} {}\n", column_name(j), LinearProgram::key(cols[j].name, cols[j].domain));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += fmt::format("* {} {}\n", row_name(i), LinearProgram::key(rows[i].name, rows[i].domain));
    }
    out += fmt::format("NAME          {}\n", name.substr(0, 8));
    out += "ROWS\n";
    out += " N  COST\n";
    std::vector<bool> free_row(rows.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        char t = 'E';
        if (std::isinf(rows[i].rhs)) {
            free_row[i] = true;
            t = 'N';
        } else if (rows[i].sense == RowSense::le) {
            t = 'L';
        } else if (rows[i].sense == RowSense::ge) {
            t = 'G';
        }
        out += fmt::format(" {}  {}\n", t, row_name(i));
    }

    // Entries grouped by column, rows ascending; duplicates summed.
    std::vector<std::vector<std::pair<int, double>>> by_col(cols.size());
    for (const auto& c : lp.coefficients()) {
        auto& v = by_col[c.col];
        bool merged = false;
        for (auto& e : v) {
            if (e.first == c.row) {
                e.second += c.value;
                merged = true;
            }
        }
        if (!merged) {
            v.emplace_back(c.row, c.value);
        }
    }
    out += "COLUMNS\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
        auto& entries = by_col[j];
        std::sort(entries.begin(), entries.end());
        std::vector<std::pair<std::string, double>> fields;
        if (cols[j].cost != 0.0) {
            fields.emplace_back("COST", cols[j].cost);
        }
        for (auto [row, value] : entries) {
            if (value != 0.0) {
                fields.emplace_back(row_name(row), value);
            }
        }
        if (fields.empty()) {
            // Keep the column declared.
            fields.emplace_back("COST", 0.0);
        }
        for (std::size_t k = 0; k < fields.size(); k += 2) {
            if (k + 1 < fields.size()) {
                out += record("", column_name(j), fields[k].first, mps_number(fields[k].second), fields[k + 1].first,
                              mps_number(fields[k + 1].second));
            } else {
                out += record("", column_name(j), fields[k].first, mps_number(fields[k].second));
            }
        }
    }
    out += "RHS\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!free_row[i] && rows[i].rhs != 0.0) {
            out += record("", "RHS", row_name(i), mps_number(rows[i].rhs));
        }
    }
    out += "BOUNDS\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const double lo = cols[j].lower;
        const double hi = cols[j].upper;
        const auto cn = column_name(j);
        if (lo == hi) {
            out += record("FX", "BND", cn, mps_number(lo));
            continue;
        }
        if (std::isinf(lo) && std::isinf(hi)) {
            out += record("FR", "BND", cn, "");
            continue;
        }
        if (std::isinf(lo)) {
            out += record("MI", "BND", cn, "");
        } else if (lo != 0.0) {
            out += record("LO", "BND", cn, mps_number(lo));
        }
        if (!std::isinf(hi)) {
            out += record("UP", "BND", cn, mps_number(hi));
        }
    }
    out += "ENDATA\n";
    return out;
}

void write_mps(const LinearProgram& lp, const std::string& path, const std::string& name)
{
    write_text_file(path, to_mps(lp, name));
}

} // namespace voltaic
