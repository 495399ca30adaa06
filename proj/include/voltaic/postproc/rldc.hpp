#pragma once

#include "voltaic/postproc/symbol.hpp"

#include <map>
#include <string>
#include <vector>

namespace voltaic {

struct RldcOverlay {
    std::string name;
    Symbol symbol;
};

struct RldcRow {
    std::size_t rank = 0; // 1-based position on the curve
    std::string hour;
    double residual = 0.0;
    double demand = 0.0;
    double vre = 0.0;
    std::vector<double> overlays; // same order as RldcTable::overlay_names
};

struct RldcTable {
    std::string node;
    std::string run;
    std::vector<std::string> overlay_names;
    std::vector<RldcRow> rows;
};

/// Hourly profile of a symbol at one node and run: the "n" and "run"
/// dims (when present) are selected, every other dim except "h" summed.
std::map<std::string, double> hourly_profile(const Symbol& s, const std::string& node, const std::string& run);

/// Numeric part of an hour label ("h12" -> 12); labels without digits
/// sort after numbered ones.
long hour_number(const std::string& label);

/// Residual load duration curve: residual(h) = demand(h) - vre(h), hours
/// sorted by descending residual, ties by ascending hour. Overlays are
/// reported at the same hour. The hours are the demand's; a VRE or overlay
/// symbol with records at the node but missing some hour is an error, one
/// with no records at the node counts as zero.
RldcTable rldc(const Symbol& demand, const Symbol& vre_gen, const std::string& node, const std::string& run,
               const std::vector<RldcOverlay>& overlays = {});

} // namespace voltaic
