#include "voltaic/postproc/report.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/postproc/rldc.hpp"

#include <algorithm>
#include <filesystem>
#include <fmt/core.h>
#include <json.hpp>
#include <set>

namespace voltaic {

namespace {

struct Table {
    std::string file;
    std::vector<std::string> dims;
    std::vector<std::string> columns; // value columns
    std::string unit;
    std::vector<std::pair<Tuple, std::vector<double>>> rows;
};

std::string render(const Table& t)
{
    CsvRow header = t.dims;
    header.insert(header.end(), t.columns.begin(), t.columns.end());
    std::string out = csv_line(header);
    for (const auto& [key, values] : t.rows) {
        CsvRow row = key;
        for (double v : values) {
            row.push_back(format_significant(v, 6));
        }
        out += csv_line(row);
    }
    return out;
}

Table single_value(const std::string& file, const Symbol& s, const std::string& unit)
{
    Table t{file, s.dims, {"value"}, unit, {}};
    for (const auto& [key, v] : s.records) {
        t.rows.push_back({key, {v}});
    }
    return t;
}

// VRE technology ids per run, from the run metadata.
std::set<std::string> vre_techs(const SymbolStore& store)
{
    std::set<std::string> out;
    for (const auto& [k, v] : store.meta) {
        const std::string prefix = "tech.";
        const std::string suffix = ".kind";
        if (k.size() > prefix.size() + suffix.size() && k.compare(0, prefix.size(), prefix) == 0 &&
            k.compare(k.size() - suffix.size(), suffix.size(), suffix) == 0 && v == "variable_renewable") {
            out.insert(k.substr(prefix.size(), k.size() - prefix.size() - suffix.size()));
        }
    }
    return out;
}

double meta_number(const SymbolStore& store, const std::string& key)
{
    auto it = store.meta.find(key);
    if (it == store.meta.end()) {
        return 0.0;
    }
    return parse_number(it->second).value_or(0.0);
}

Symbol sum_hours(const Symbol& s) { return aggregate(s, "h", Aggregation::sum); }

} // namespace

ReportOutput standard_report(const SymbolsHandler& handler, const std::string& out_dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create report directory {}: {}", out_dir, ec.message()));
    }
    ReportOutput out;
    std::vector<Table> tables;
    auto need = [&](const std::vector<std::string>& names, const std::string& section) {
        for (const auto& n : names) {
            if (!handler.has_symbol(n)) {
                out.notices.push_back(fmt::format("{} skipped: symbol {} not in results", section, n));
                return false;
            }
        }
        return true;
    };

    if (need({"N"}, "capacity.csv")) {
        tables.push_back(single_value("capacity.csv", handler.lookup("N"), "MW"));
    }
    if (need({"G"}, "generation.csv")) {
        tables.push_back(single_value("generation.csv", sum_hours(handler.lookup("G")), "MWh"));
    }
    if (need({"N_STO_E", "N_STO_P", "STO_IN", "STO_OUT"}, "storage.csv")) {
        auto e = handler.lookup("N_STO_E");
        auto p = handler.lookup("N_STO_P");
        auto in = sum_hours(handler.lookup("STO_IN"));
        auto outflow = sum_hours(handler.lookup("STO_OUT"));
        Table t{"storage.csv", e.dims, {"energy_capacity", "power_capacity", "charge", "discharge"}, "MWh,MW,MWh,MWh", {}};
        for (const auto& [key, ev] : e.records) {
            t.rows.push_back({key,
                              {ev, p.get(key).value_or(0.0), in.get(key).value_or(0.0),
                               outflow.get(key).value_or(0.0)}});
        }
        tables.push_back(std::move(t));
    }
    if (need({"CU"}, "curtailment.csv")) {
        tables.push_back(single_value("curtailment.csv", sum_hours(handler.lookup("CU")), "MWh"));
    }
    {
        Table t{"objective.csv", {"run"}, {"total", "investment", "variable"}, "EUR", {}};
        for (const auto& run : handler.runs()) {
            const auto* s = handler.store(run);
            t.rows.push_back({{run},
                              {meta_number(*s, "objective"), meta_number(*s, "objective_investment"),
                               meta_number(*s, "objective_variable")}});
        }
        tables.push_back(std::move(t));
    }
    if (need({"d", "G"}, "rldc.csv")) {
        Table t{"rldc.csv",
                {"n", "run", "rank", "hour"},
                {"residual", "demand", "vre", "dispatchable", "storage_in", "storage_out", "slack", "net_import"},
                "MWh",
                {}};
        for (const auto& run : handler.runs()) {
            const auto* store = handler.store(run);
            const Symbol* d = store->find("d");
            const Symbol* g = store->find("G");
            if (!d || !g) {
                out.notices.push_back(fmt::format("rldc.csv: run {} lacks d or G", run));
                continue;
            }
            auto vre_ids = vre_techs(*store);
            std::vector<std::string> vre_list(vre_ids.begin(), vre_ids.end());
            std::vector<std::string> disp_list;
            for (const auto& [key, v] : g->records) {
                if (!vre_ids.count(key[0]) &&
                    std::find(disp_list.begin(), disp_list.end(), key[0]) == disp_list.end()) {
                    disp_list.push_back(key[0]);
                }
            }
            Symbol empty;
            empty.dims = {"n", "h"};
            auto pick = [&](const char* name) {
                const Symbol* s = store->find(name);
                return s ? *s : empty;
            };
            std::vector<RldcOverlay> overlays = {
                {"dispatchable", filter(*g, "tech", disp_list)},
                {"storage_in", pick("STO_IN")},
                {"storage_out", pick("STO_OUT")},
                {"slack", pick("SLACK")},
            };
            Symbol vre = filter(*g, "tech", vre_list);
            std::set<std::string> nodes;
            for (const auto& [key, v] : d->records) {
                nodes.insert(key[d->dim_index("n")]);
            }
            for (const auto& node : nodes) {
                auto curve = rldc(*d, vre, node, run, overlays);
                for (const auto& r : curve.rows) {
                    double disp = r.overlays[0];
                    double sin = r.overlays[1];
                    double sout = r.overlays[2];
                    double slack = r.overlays[3];
                    // Whatever the node does not produce or store locally it imports.
                    double net_import = r.demand - r.vre - disp - sout + sin - slack;
                    t.rows.push_back({{node, run, std::to_string(r.rank), r.hour},
                                      {r.residual, r.demand, r.vre, disp, sin, sout, slack, net_import}});
                }
            }
        }
        tables.push_back(std::move(t));
    }

    nlohmann::json manifest;
    manifest["tables"] = nlohmann::json::array();
    for (const auto& t : tables) {
        write_text_file((fs::path(out_dir) / t.file).string(), render(t));
        out.files.push_back(t.file);
        manifest["tables"].push_back(
            {{"file", t.file}, {"dims", t.dims}, {"columns", t.columns}, {"unit", t.unit}, {"rows", t.rows.size()}});
    }
    manifest["notices"] = out.notices;
    write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    out.files.push_back("manifest.json");
    return out;
}

} // namespace voltaic
