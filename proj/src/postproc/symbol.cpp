#include "voltaic/postproc/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <stdexcept>

namespace voltaic {

std::string to_string(ValueKind kind)
{
    switch (kind) {
    case ValueKind::level:
        return "level";
    case ValueKind::marginal:
        return "marginal";
    case ValueKind::parameter:
        break;
    }
    return "parameter";
}

std::optional<ValueKind> parse_value_kind(std::string_view s)
{
    auto l = to_lower(trim(s));
    if (l == "level") {
        return ValueKind::level;
    }
    if (l == "marginal") {
        return ValueKind::marginal;
    }
    if (l == "parameter") {
        return ValueKind::parameter;
    }
    return std::nullopt;
}

Symbol Symbol::scalar(double value, std::string name)
{
    Symbol s;
    s.name = std::move(name);
    s.kind = ValueKind::parameter;
    s.set({}, value);
    return s;
}

void Symbol::set(const Tuple& key, double value)
{
    if (key.size() != dims.size()) {
        throw std::invalid_argument(fmt::format("symbol '{}': key of arity {} for {} dims", name, key.size(),
                                                dims.size()));
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument(fmt::format("symbol '{}': non-finite value at ({})", name, join(key, ",")));
    }
    records[key] = value;
}

std::optional<double> Symbol::get(const Tuple& key) const
{
    auto it = records.find(key);
    if (it == records.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool Symbol::has_dim(const std::string& dim) const { return dim_index(dim) >= 0; }

int Symbol::dim_index(const std::string& dim) const
{
    auto it = std::find(dims.begin(), dims.end(), dim);
    return it == dims.end() ? -1 : static_cast<int>(it - dims.begin());
}

bool Symbol::same_content(const Symbol& other) const { return dims == other.dims && records == other.records; }

const Symbol* SymbolStore::find(const std::string& name) const
{
    auto it = symbols.find(name);
    return it == symbols.end() ? nullptr : &it->second;
}

namespace {

bool contains_all(const std::vector<std::string>& big, const std::vector<std::string>& small)
{
    return std::all_of(small.begin(), small.end(),
                       [&](const auto& d) { return std::find(big.begin(), big.end(), d) != big.end(); });
}

// Positions in `from` of each dim of `to`.
std::vector<int> projection(const std::vector<std::string>& from, const std::vector<std::string>& to)
{
    std::vector<int> pos;
    for (const auto& d : to) {
        pos.push_back(static_cast<int>(std::find(from.begin(), from.end(), d) - from.begin()));
    }
    return pos;
}

Tuple project(const Tuple& key, const std::vector<int>& pos)
{
    Tuple out;
    out.reserve(pos.size());
    for (int p : pos) {
        out.push_back(key[p]);
    }
    return out;
}

std::string dim_list(const std::vector<std::string>& dims) { return "(" + join(dims, ",") + ")"; }

} // namespace

BinopResult binop(const Symbol& a, const Symbol& b, BinOp op)
{
    const bool a_has_b = contains_all(a.dims, b.dims);
    const bool b_has_a = contains_all(b.dims, a.dims);
    if (!a_has_b && !b_has_a) {
        throw std::invalid_argument(fmt::format("dimension mismatch: {} vs {}", dim_list(a.dims), dim_list(b.dims)));
    }
    const bool larger_is_a = a_has_b;
    const Symbol& large = larger_is_a ? a : b;
    const Symbol& small = larger_is_a ? b : a;

    BinopResult out;
    out.symbol.kind = a.kind;
    out.symbol.dims = large.dims;

    auto combine = [&](double x, double y, const Tuple& key) {
        double v = 0.0;
        switch (op) {
        case BinOp::add:
            v = x + y;
            break;
        case BinOp::sub:
            v = x - y;
            break;
        case BinOp::mul:
            v = x * y;
            break;
        case BinOp::div:
            if (y == 0.0) {
                ++out.division_by_zero;
                return;
            }
            v = x / y;
            break;
        }
        out.symbol.records[key] = v;
    };
    const bool additive = op == BinOp::add || op == BinOp::sub;

    auto pos = projection(large.dims, small.dims);
    for (const auto& [key, lv] : large.records) {
        auto sv = small.records.find(project(key, pos));
        if (sv != small.records.end()) {
            if (larger_is_a) {
                combine(lv, sv->second, key);
            } else {
                combine(sv->second, lv, key);
            }
        } else if (additive) {
            out.symbol.records[key] = (op == BinOp::sub && !larger_is_a) ? -lv : lv;
        }
    }
    // Equal dims: the other operand's own keys join the union.
    if (additive && a_has_b && b_has_a) {
        auto back = projection(small.dims, large.dims);
        for (const auto& [key, sv] : small.records) {
            Tuple k = project(key, back);
            if (!large.records.count(k)) {
                out.symbol.records[k] = op == BinOp::sub ? -sv : sv;
            }
        }
    }
    return out;
}

Symbol operator+(const Symbol& a, const Symbol& b) { return binop(a, b, BinOp::add).symbol; }
Symbol operator-(const Symbol& a, const Symbol& b) { return binop(a, b, BinOp::sub).symbol; }
Symbol operator*(const Symbol& a, const Symbol& b) { return binop(a, b, BinOp::mul).symbol; }
Symbol operator/(const Symbol& a, const Symbol& b) { return binop(a, b, BinOp::div).symbol; }

Symbol aggregate(const Symbol& s, const std::string& over, Aggregation how)
{
    int idx = s.dim_index(over);
    if (idx < 0) {
        throw std::invalid_argument(fmt::format("symbol '{}' has no dim '{}' {}", s.name, over, dim_list(s.dims)));
    }
    Symbol out;
    out.name = s.name;
    out.kind = s.kind;
    out.unit = s.unit;
    out.dims = s.dims;
    out.dims.erase(out.dims.begin() + idx);
    std::map<Tuple, std::size_t> counts;
    for (const auto& [key, v] : s.records) {
        Tuple k = key;
        k.erase(k.begin() + idx);
        auto [it, fresh] = out.records.emplace(k, v);
        ++counts[k];
        if (fresh) {
            continue;
        }
        if (how == Aggregation::max) {
            it->second = std::max(it->second, v);
        } else {
            it->second += v;
        }
    }
    if (how == Aggregation::mean) {
        for (auto& [k, v] : out.records) {
            v /= static_cast<double>(counts[k]);
        }
    }
    return out;
}

Symbol select(const Symbol& s, const std::string& dim, const std::string& element)
{
    int idx = s.dim_index(dim);
    if (idx < 0) {
        throw std::invalid_argument(fmt::format("symbol '{}' has no dim '{}' {}", s.name, dim, dim_list(s.dims)));
    }
    Symbol out;
    out.name = s.name;
    out.kind = s.kind;
    out.unit = s.unit;
    out.dims = s.dims;
    out.dims.erase(out.dims.begin() + idx);
    for (const auto& [key, v] : s.records) {
        if (key[idx] == element) {
            Tuple k = key;
            k.erase(k.begin() + idx);
            out.records.emplace(std::move(k), v);
        }
    }
    return out;
}

Symbol filter(const Symbol& s, const std::string& dim, const std::vector<std::string>& elements)
{
    int idx = s.dim_index(dim);
    if (idx < 0) {
        throw std::invalid_argument(fmt::format("symbol '{}' has no dim '{}' {}", s.name, dim, dim_list(s.dims)));
    }
    Symbol out = s;
    out.records.clear();
    for (const auto& [key, v] : s.records) {
        if (std::find(elements.begin(), elements.end(), key[idx]) != elements.end()) {
            out.records.emplace(key, v);
        }
    }
    return out;
}

} // namespace voltaic
