#pragma once

#include "voltaic/model/linear_program.hpp"

#include <string>

namespace voltaic {

/// Fixed-format MPS text. Columns and rows get 8-character names
/// (C0000001, R0000001); the mapping to model names is written as comment
/// lines so external tools can read it back. Inequality rows with an
/// infinite rhs are written as free (N) rows.
std::string to_mps(const LinearProgram& lp, const std::string& name = "VOLTAIC");

void write_mps(const LinearProgram& lp, const std::string& path, const std::string& name = "VOLTAIC");

} // namespace voltaic
