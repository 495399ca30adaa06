#pragma once

#include "voltaic/model/builder.hpp"
#include "voltaic/model/types.hpp"
#include "voltaic/postproc/symbol.hpp"
#include "voltaic/scenario/iteration_table.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace voltaic {

/// Fixed project layout, relative to the root:
///   data_input/<static_input>/        nodes.csv technologies.csv storage.csv lines.csv [fixed_capacities.csv]
///   data_input/<timeseries_input>/    *.csv, an "hour" column plus one column per series
///   iterationfiles/iteration_table.csv
///   iterationfiles/<iteration_data>/  *.csv, alternative series for scenarios
///   model/
///   settings/constraints_list.csv features_node_selection.csv
///            reporting_symbols.csv project_variables.csv
struct ProjectLayout {
    std::filesystem::path root;

    std::filesystem::path data_input() const { return root / "data_input"; }
    std::filesystem::path iteration_files() const { return root / "iterationfiles"; }
    std::filesystem::path model_dir() const { return root / "model"; }
    std::filesystem::path settings() const { return root / "settings"; }
    std::filesystem::path results() const { return root / "results"; }
    std::filesystem::path report() const { return root / "report"; }
    std::filesystem::path iteration_table() const { return iteration_files() / "iteration_table.csv"; }
    std::filesystem::path project_variables() const { return settings() / "project_variables.csv"; }
    std::filesystem::path features() const { return settings() / "features_node_selection.csv"; }
    std::filesystem::path reporting_symbols() const { return settings() / "reporting_symbols.csv"; }
    std::filesystem::path constraints_list() const { return settings() / "constraints_list.csv"; }

    /// Input file names from project_variables may carry a workbook
    /// extension; the directory of that stem is used.
    static std::string directory_name(const std::string& configured);
};

struct ReportingEntry {
    std::string symbol;
    ValueKind kind = ValueKind::level;
};

struct Project {
    ProjectLayout layout;
    SystemData data;
    ModelConfig config;
    FeatureMatrix features;
    ConstraintChoices choices;
    std::vector<ScenarioSpec> scenarios;
    std::vector<ReportingEntry> reporting;
    std::vector<std::string> warnings;
};

/// Reads and validates the whole project. Failures throw ValidationError
/// naming the file, row and column or field; unreadable files throw IoError.
Project load_project(const std::filesystem::path& root);

/// Individual readers, exposed for tests and the validate verb.
ModelConfig parse_project_variables(std::string_view text, std::vector<std::string>* warnings = nullptr);
FeatureMatrix parse_features(std::string_view text, const std::vector<std::string>& nodes);
std::vector<ReportingEntry> parse_reporting_symbols(std::string_view text);
ConstraintChoices parse_constraints_list(std::string_view text);

/// Reads every *.csv in a directory (sorted by file name) as named series.
/// Each must have H data rows; a series name may appear only once.
void load_series_directory(const std::filesystem::path& dir, int hours, std::map<std::string, TimeSeries>& out);

} // namespace voltaic
