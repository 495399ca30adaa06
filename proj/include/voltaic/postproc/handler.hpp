#pragma once

#include "voltaic/postproc/symbol.hpp"

#include <map>
#include <string>
#include <vector>

namespace voltaic {

/// Read-only view over the stores of several runs.
class SymbolsHandler {
public:
    SymbolsHandler() = default;
    explicit SymbolsHandler(std::vector<SymbolStore> stores);

    /// Replaces any store with the same run id.
    void add(SymbolStore store);

    std::vector<std::string> runs() const;
    const SymbolStore* store(const std::string& run_id) const;
    bool has_symbol(const std::string& name) const;

    /// One symbol across all runs with a trailing "run" dim. Runs that
    /// lack the symbol contribute no records. Throws std::out_of_range
    /// when no run has it.
    Symbol lookup(const std::string& name) const;

private:
    std::map<std::string, SymbolStore> stores_;
};

} // namespace voltaic
