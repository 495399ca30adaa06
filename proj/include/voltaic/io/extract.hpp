#pragma once

#include "voltaic/io/project.hpp"
#include "voltaic/postproc/symbol.hpp"
#include "voltaic/scenario/runner.hpp"

#include <string>
#include <vector>

namespace voltaic {

struct Extraction {
    std::vector<SymbolStore> stores; // one per result, same order
    std::vector<std::string> warnings;
};

/// Builds the result stores for the listed symbols. Variables give levels
/// (primal) or marginals (reduced costs), equations row activities or duals,
/// parameters their effective values. Columns and rows the scenario
/// excluded, and anything at an inactive node, are left out. Names that
/// match nothing are stored empty with a warning. Runs are extracted
/// concurrently; the output does not depend on `threads`.
Extraction extract_symbols(const std::vector<RunResult>& results, const std::vector<ReportingEntry>& reporting,
                           std::size_t threads);

/// Scalar metadata of one run (status, objective and its split, config
/// echo, technology kinds, active nodes).
std::map<std::string, std::string> run_metadata(const RunResult& result);

} // namespace voltaic
