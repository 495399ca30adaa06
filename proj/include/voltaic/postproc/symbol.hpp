#pragma once

#include "voltaic/common/strings.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace voltaic {

enum class ValueKind { level, marginal, parameter };

std::string to_string(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view s);

/// Named, dimension-labelled sparse array. Absent keys are "no record",
/// never an implicit zero.
struct Symbol {
    std::string name;
    ValueKind kind = ValueKind::level;
    std::vector<std::string> dims;
    std::map<Tuple, double> records;
    std::string unit;

    static Symbol scalar(double value, std::string name = {});

    /// Inserts or replaces a record; checks arity and finiteness.
    void set(const Tuple& key, double value);
    std::optional<double> get(const Tuple& key) const;
    std::size_t size() const { return records.size(); }
    bool has_dim(const std::string& dim) const;
    int dim_index(const std::string& dim) const;

    /// Same dims and records (name, kind and unit are labels only).
    bool same_content(const Symbol& other) const;
};

enum class BinOp { add, sub, mul, div };

struct BinopResult {
    Symbol symbol;
    std::size_t division_by_zero = 0;
};

/// Broadcast arithmetic. One operand's dims must be a subset of the
/// other's; the result carries the larger dim list. Keys of the larger
/// operand are matched against the smaller one by projection.
///
/// With equal dims, + and - take the key union (a key in one operand
/// only keeps its value, negated on the right of -), * and / the
/// intersection. When broadcasting, the result keys are the larger
/// operand's keys; unmatched keys behave as above. Division by zero drops
/// the key and is counted.
///
/// Throws std::invalid_argument when neither dim list contains the other.
BinopResult binop(const Symbol& a, const Symbol& b, BinOp op);

Symbol operator+(const Symbol& a, const Symbol& b);
Symbol operator-(const Symbol& a, const Symbol& b);
Symbol operator*(const Symbol& a, const Symbol& b);
Symbol operator/(const Symbol& a, const Symbol& b);

enum class Aggregation { sum, mean, max };

/// Folds one dimension away. Throws std::invalid_argument for an unknown dim.
Symbol aggregate(const Symbol& s, const std::string& over, Aggregation how);

/// Records whose `dim` equals `element`, with that dim removed.
Symbol select(const Symbol& s, const std::string& dim, const std::string& element);

/// Records whose `dim` lies in `elements` (dim kept).
Symbol filter(const Symbol& s, const std::string& dim, const std::vector<std::string>& elements);

/// Extracted results of one run: symbols plus scalar metadata.
struct SymbolStore {
    std::string run_id;
    std::map<std::string, Symbol> symbols;
    std::map<std::string, std::string> meta;

    const Symbol* find(const std::string& name) const;
};

} // namespace voltaic
