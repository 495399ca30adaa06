#include "voltaic/cli/cli.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"
#include "voltaic/io/extract.hpp"
#include "voltaic/io/project.hpp"
#include "voltaic/io/store.hpp"
#include "voltaic/postproc/report.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <iostream>
#include <map>
#include <mutex>

namespace voltaic {

namespace fs = std::filesystem;

namespace {

// Inputs kept between loads in one process, for skip_input.
std::mutex cache_mutex;
std::map<std::string, Project> input_cache;

Project load_cached(const fs::path& root)
{
    const auto key = fs::weakly_canonical(root).string();
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = input_cache.find(key);
        if (it != input_cache.end()) {
            // settings are always re-read: they decide whether the cache applies
            auto cfg = parse_project_variables(read_text_file(ProjectLayout{root}.project_variables().string()));
            if (cfg.skip_input) {
                return it->second;
            }
        }
    }
    Project p = load_project(root);
    std::lock_guard<std::mutex> lock(cache_mutex);
    input_cache[key] = p;
    return p;
}

std::optional<std::size_t> env_threads()
{
    const char* v = std::getenv("VOLTAIC_THREADS");
    if (!v || !*v) {
        return std::nullopt;
    }
    auto n = parse_number(v);
    if (!n || *n < 0 || *n != static_cast<double>(static_cast<long>(*n))) {
        throw ValidationError(fmt::format("VOLTAIC_THREADS: '{}' is not a thread count", v));
    }
    return static_cast<std::size_t>(*n);
}

template <typename F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_validation;
    } catch (const SolveError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_solve;
    } catch (const IoError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_io;
    }
}

int write_report(const ProjectLayout& L, const SymbolsHandler& handler, std::ostream& out, std::ostream& err)
{
    auto rep = standard_report(handler, L.report().string());
    for (const auto& n : rep.notices) {
        fmt::print(err, "notice: {}\n", n);
    }
    fmt::print(out, "report: {} files in {}\n", rep.files.size(), L.report().string());
    return exit_ok;
}

} // namespace

int run_project(const RunCommand& cmd, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        Project p = load_cached(cmd.root);
        for (const auto& w : p.warnings) {
            fmt::print(err, "warning: {}\n", w);
        }
        RunOptions opt;
        opt.mode = cmd.mode.value_or(mode_from_config(p.config));
        auto env = env_threads();
        opt.threads = cmd.threads ? *cmd.threads
                      : env       ? *env
                                  : static_cast<std::size_t>(p.config.guss_parallel_threads);
        const std::size_t extract_threads =
            cmd.threads ? *cmd.threads : static_cast<std::size_t>(p.config.convert_parallel_threads);

        ScenarioBase base{p.data, p.config, p.features, p.choices};
        auto results = run_scenarios(p.scenarios, base, opt);

        std::size_t failed = 0;
        for (const auto& r : results) {
            if (r.ok()) {
                fmt::print(out, "{:<12} {:<10} objective={:<16} {:.2f} s\n", r.run_id, r.status_text(),
                           format_significant(r.solution.objective, 10), r.wall_seconds);
            } else {
                ++failed;
                fmt::print(out, "{:<12} {:<10} {:<26} {:.2f} s\n", r.run_id, r.status_text(), "-", r.wall_seconds);
                fmt::print(err, "run {}: {}\n", r.run_id,
                           r.error.empty() ? r.solution.message.empty() ? r.status_text() : r.solution.message
                                           : r.error);
            }
        }

        auto extraction = extract_symbols(results, p.reporting, extract_threads);
        for (const auto& w : extraction.warnings) {
            fmt::print(err, "warning: {}\n", w);
        }
        const auto& L = p.layout;
        std::error_code ec;
        fs::remove_all(L.results(), ec);
        if (ec) {
            throw IoError(fmt::format("{}: cannot clear: {}", L.results().string(), ec.message()));
        }
        StoreFormats formats{true, p.config.write_binary};
        for (const auto& s : extraction.stores) {
            write_store(s, L.results(), formats);
        }
        fmt::print(out, "mode {}: {} runs, {} stores in {}\n", to_string(opt.mode), results.size(),
                   extraction.stores.size(), L.results().string());

        if (p.config.report_data) {
            write_report(L, SymbolsHandler(extraction.stores), out, err);
        }
        if (failed > 0) {
            fmt::print(err, "{} of {} runs did not reach optimal\n", failed, results.size());
            return static_cast<int>(exit_solve);
        }
        return static_cast<int>(exit_ok);
    });
}

int report_project(const fs::path& root, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        ProjectLayout L{root};
        auto stores = read_stores(L.results());
        return write_report(L, SymbolsHandler(std::move(stores)), out, err);
    });
}

int validate_project(const fs::path& root, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        Project p = load_project(root);
        for (const auto& w : p.warnings) {
            fmt::print(err, "warning: {}\n", w);
        }
        ScenarioBase base{p.data, p.config, p.features, p.choices};
        for (const auto& spec : p.scenarios) {
            try {
                apply_overrides(spec, base);
            } catch (const ValidationError& e) {
                throw ValidationError(fmt::format("scenario {}: {}", spec.run_id, e.what()));
            }
        }
        fmt::print(out, "ok: {} nodes, {} technologies, {} storage units, {} lines, {} hours, {} runs\n",
                   p.data.nodes.size(), p.data.technologies.size(), p.data.storages.size(), p.data.lines.size(),
                   p.config.end_hour, p.scenarios.size());
        return static_cast<int>(exit_ok);
    });
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"voltaic - power system capacity expansion and dispatch scenarios"};
    app.require_subcommand(1);

    std::string name;
    std::string tmpl = "minimal";
    auto* create = app.add_subcommand("create_project", "Create a project folder from a template");
    create->add_option("-n,--name", name, "Project directory to create")->required();
    create->add_option("-t,--template", tmpl, "minimal | example1 | example2")->capture_default_str();

    std::string root = ".";
    std::string mode_text;
    std::size_t threads = 0;
    auto* run = app.add_subcommand("run", "Solve every scenario and write result stores");
    run->add_option("root", root, "Project directory")->capture_default_str();
    auto* mode_opt = run->add_option("-m,--mode", mode_text,
                                     "rebuild | single_instance | parallel "
                                     "(default from GUSS / GUSS_parallel in project_variables.csv)");
    auto* threads_opt = run->add_option("-j,--threads", threads,
                                        "Worker threads, 0 = all cores. Precedence: this flag, then "
                                        "VOLTAIC_THREADS, then GUSS_parallel_threads");
    run->footer("Command-line flags take precedence over project_variables.csv.");

    auto* report = app.add_subcommand("report", "Write report tables from existing result stores");
    report->add_option("root", root, "Project directory")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Load and check a project without solving");
    validate->add_option("root", root, "Project directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    if (create->parsed()) {
        return guarded(std::cerr, [&] {
            create_project(name, tmpl);
            fmt::print("created {} from template {}\n", name, tmpl);
            return static_cast<int>(exit_ok);
        });
    }
    if (run->parsed()) {
        RunCommand cmd;
        cmd.root = root;
        if (*mode_opt) {
            auto m = parse_run_mode(mode_text);
            if (!m) {
                fmt::print(std::cerr, "error: unknown mode '{}'\n", mode_text);
                return exit_validation;
            }
            cmd.mode = m;
        }
        if (*threads_opt) {
            cmd.threads = threads;
        }
        return run_project(cmd, std::cout, std::cerr);
    }
    if (report->parsed()) {
        return report_project(root, std::cout, std::cerr);
    }
    return validate_project(root, std::cout, std::cerr);
}

} // namespace voltaic
