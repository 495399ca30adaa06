#pragma once

#include "voltaic/postproc/symbol.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace voltaic {

enum class StoreFormat { text, binary };

struct StoreFormats {
    bool text = true;
    bool binary = false;
};

/// File-system name of a stored symbol: the symbol name for levels and
/// parameters, "<name>.m" for marginals.
std::string store_key(const std::string& name, ValueKind kind);

/// Writes results/<run_id>/ from scratch:
///   <key>.csv   dims..., value   (rows in lexicographic key order)
///   run.meta    key=value lines, sorted; symbol kinds and units included
///   run.vcol    every symbol and the metadata in one binary file (optional)
/// Throws IoError if the directory cannot be written.
void write_store(const SymbolStore& store, const std::filesystem::path& results_dir, StoreFormats formats);

/// Reads one run directory in the given format.
SymbolStore read_store(const std::filesystem::path& run_dir, StoreFormat format);

/// Reads every run below results_dir (text if present, else binary), sorted
/// by run id. Throws IoError when there are none.
std::vector<SymbolStore> read_stores(const std::filesystem::path& results_dir);

/// Text form of a single symbol, as written to <key>.csv.
std::string symbol_to_csv(const Symbol& s);

} // namespace voltaic
