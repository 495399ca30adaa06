#pragma once

#include "voltaic/scenario/runner.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace voltaic {

/// Exit codes of every verb.
enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_solve = 2, exit_io = 3 };

std::vector<std::string> template_names();

/// Materialises a project skeleton at `root`. Throws ValidationError for an
/// unknown template and IoError if `root` already exists.
void create_project(const std::filesystem::path& root, const std::string& template_name);

struct RunCommand {
    std::filesystem::path root = ".";
    std::optional<RunMode> mode;       // overrides GUSS / GUSS_parallel
    std::optional<std::size_t> threads; // overrides VOLTAIC_THREADS and the project file
};

/// load -> build -> scenarios -> extract -> write (-> report when
/// report_data is on). Per-run summaries go to `out`, diagnostics to `err`.
int run_project(const RunCommand& cmd, std::ostream& out, std::ostream& err);
int report_project(const std::filesystem::path& root, std::ostream& out, std::ostream& err);
int validate_project(const std::filesystem::path& root, std::ostream& out, std::ostream& err);

/// Full command line, as used by the voltaic executable.
int run_cli(int argc, char** argv);

} // namespace voltaic
