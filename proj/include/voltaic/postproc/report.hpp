#pragma once

#include "voltaic/postproc/handler.hpp"

#include <string>
#include <vector>

namespace voltaic {

struct ReportOutput {
    std::vector<std::string> files;   // relative to the report directory
    std::vector<std::string> notices; // skipped sections and why
};

/// Writes the standard per-run tables into `out_dir`:
///   capacity.csv     installed MW by (tech, n, run)            needs N
///   generation.csv   MWh over the horizon by (tech, n, run)    needs G
///   storage.csv      energy/power capacity, charge, discharge  needs N_STO_E, N_STO_P, STO_IN, STO_OUT
///   curtailment.csv  MWh by (tech, n, run)                     needs CU
///   objective.csv    total, investment and variable cost per run
///   rldc.csv         residual load duration curve per (n, run) needs d, G
///   manifest.json    tables, dims, units
/// A section whose symbols are missing is skipped with a notice. Numbers
/// are rounded to 6 significant digits at emission only.
ReportOutput standard_report(const SymbolsHandler& handler, const std::string& out_dir);

} // namespace voltaic
