// Project skeletons. Data are synthetic; profiles come from a fixed-seed
// generator so every create_project yields identical files.
#include "voltaic/cli/cli.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"
#include "voltaic/model/builder.hpp"
#include "voltaic/model/types.hpp"
#include "voltaic/io/project.hpp"

#include <cmath>
#include <fmt/core.h>
#include <random>

namespace voltaic {

namespace fs = std::filesystem;

namespace {

struct NodeSpec {
    std::string id;
    double peak;     // MW
    double sun;      // solar yield factor
    double wind;     // mean wind availability
    bool phs = false;
    bool p2g2p = false;
};

struct TemplateSpec {
    std::vector<NodeSpec> nodes;
    std::vector<std::pair<std::string, std::string>> lines;
    int hours = 48;
    bool scenarios = true;
    std::string iteration_table; // full text
};

// mt19937's sequence is fixed by the standard; the distributions are not.
class Noise {
public:
    explicit Noise(unsigned seed) : rng_(seed) {}
    double uniform() { return static_cast<double>(rng_()) / 4294967296.0; }

private:
    std::mt19937 rng_;
};

// step is a power of ten; dividing by its inverse keeps e.g. 50.8 exact
double round_to(double v, double step)
{
    if (step < 1.0) {
        const double inv = std::round(1.0 / step);
        return std::round(v * inv) / inv;
    }
    return std::round(v / step) * step;
}

std::string num(double v) { return format_exact(v); }

std::string series_file(const std::vector<std::string>& names, const std::vector<std::vector<double>>& cols, int hours)
{
    CsvRow header{"hour"};
    header.insert(header.end(), names.begin(), names.end());
    std::string out = csv_line(header);
    for (int h = 0; h < hours; ++h) {
        CsvRow row{hour_label(static_cast<std::size_t>(h) + 1)};
        for (const auto& c : cols) {
            row.push_back(num(c[h]));
        }
        out += csv_line(row);
    }
    return out;
}

void write(const fs::path& p, const std::string& text)
{
    fs::create_directories(p.parent_path());
    write_text_file(p.string(), text);
}

std::string project_variables(const TemplateSpec& t)
{
    // keys and values as documented for the original tool, horizon shortened
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"scenarios_iteration", t.scenarios ? "yes" : "no"},
        {"skip_input", "no"},
        {"skip_iteration_data_file", "no"},
        {"base_year", "2030"},
        {"end_hour", "h" + std::to_string(t.hours)},
        {"dispatch_only", "no"},
        {"network_transfer", "yes"},
        {"no_crossover", "yes"},
        {"infeasibility", "no"},
        {"GUSS", "yes"},
        {"GUSS_parallel", "yes"},
        {"GUSS_parallel_threads", "0"},
        {"data_input_file", "static_input.xlsx"},
        {"time_series_file", "timeseries_input.xlsx"},
        {"iteration_data_file", "iteration_data.xlsx"},
        {"gdx_convert_parallel_threads", "0"},
        {"gdx_convert_to_csv", "no"},
        {"gdx_convert_to_pickle", "yes"},
        {"gdx_convert_to_vaex", "no"},
        {"report_data", "yes"},
    };
    std::string out = csv_line({"Variable", "Value"});
    for (const auto& [k, v] : rows) {
        out += csv_line({k, v});
    }
    return out;
}

std::string features(const std::vector<std::string>& nodes)
{
    CsvRow header{"module"};
    header.insert(header.end(), nodes.begin(), nodes.end());
    std::string out = csv_line(header);
    for (const char* m : feature_modules) {
        CsvRow row{m};
        row.resize(nodes.size() + 1, "0");
        out += csv_line(row);
    }
    return out;
}

std::string constraints_list()
{
    std::string out = csv_line({"constraint", "choices", "default"});
    for (const auto& b : constraint_blocks()) {
        out += csv_line({b.name, join(b.choices, ";"), b.default_choice});
    }
    return out;
}

std::string reporting_symbols()
{
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"N", "level"},       {"G", "level"},     {"CU", "level"},      {"STO_IN", "level"},
        {"STO_OUT", "level"}, {"STO_L", "level"}, {"N_STO_E", "level"}, {"N_STO_P", "level"},
        {"F", "level"},       {"NTC", "level"},   {"SLACK", "level"},   {"d", "level"},
        {"BAL", "marginal"},
    };
    std::string out = csv_line({"symbol", "kind"});
    for (const auto& [s, k] : rows) {
        out += csv_line({s, k});
    }
    return out;
}

void materialise(const fs::path& root, const TemplateSpec& t)
{
    ProjectLayout L{root};
    const auto static_dir = L.data_input() / "static_input";
    const auto ts_dir = L.data_input() / "timeseries_input";

    std::vector<std::string> ids;
    for (const auto& n : t.nodes) {
        ids.push_back(n.id);
    }

    std::string nodes = csv_line({"id", "demand", "min_renewable_share", "co2_cap"});
    std::string techs = csv_line({"id", "node", "kind", "c_inv_power", "c_fix", "c_var", "co2_intensity", "cap_min",
                                  "cap_max", "availability"});
    std::string stos = csv_line({"id", "node", "c_i_sto_e", "c_i_sto_p", "c_fix_sto", "c_var_sto", "eta_in",
                                 "eta_out", "e_min", "e_max", "p_min", "p_max"});
    for (const auto& n : t.nodes) {
        const double cap = round_to(1.2 * n.peak, 1.0);
        nodes += csv_line({n.id, "demand_" + n.id, "0", ""});
        techs += csv_line({"gas", n.id, "dispatchable", "45000", "0", "75", "0.35", "0", num(cap), ""});
        techs += csv_line({"solar", n.id, "variable_renewable", "38000", "0", "0", "0", "0", num(3 * cap),
                           "solar_" + n.id});
        techs += csv_line({"wind", n.id, "variable_renewable", "95000", "0", "0", "0", "0", num(3 * cap),
                           "wind_" + n.id});
        stos += csv_line({"Li-ion", n.id, "20029", "15021", "0", "0.5", "0.95", "0.95", "0", num(8 * cap), "0",
                          num(cap)});
        if (n.phs) {
            // existing plant: both bounds fixed
            const double p = round_to(0.2 * n.peak, 1);
            stos += csv_line({"PHS", n.id, "0", "0", "0", "0.5", "0.9", "0.9", num(8 * p), num(8 * p), num(p), num(p)});
        }
        if (n.p2g2p) {
            stos += csv_line({"P2G2P", n.id, "600", "120000", "0", "1", "0.7", "0.5", "0", num(200 * cap), "0",
                              num(cap)});
        }
    }
    std::string lines = csv_line({"id", "from_node", "to_node", "ntc_existing", "ntc_max", "c_inv_ntc", "loss_factor"});
    for (const auto& [a, b] : t.lines) {
        lines += csv_line({a + "-" + b, a, b, "5", "100", "30000", "0"});
    }
    write(static_dir / "nodes.csv", nodes);
    write(static_dir / "technologies.csv", techs);
    write(static_dir / "storage.csv", stos);
    write(static_dir / "lines.csv", lines);

    Noise noise(20300101u);
    std::vector<std::string> dn, sn, wn;
    std::vector<std::vector<double>> dc, sc, wc;
    const double pi = std::acos(-1.0);
    for (const auto& n : t.nodes) {
        std::vector<double> d(t.hours), s(t.hours), w(t.hours);
        double cloud = 1.0;
        double wv = n.wind;
        for (int h = 0; h < t.hours; ++h) {
            const int hod = h % 24;
            if (hod == 0) {
                cloud = 0.55 + 0.45 * noise.uniform();
            }
            const double daylight = std::max(0.0, std::sin(pi * (hod - 6) / 12.0));
            s[h] = round_to(std::min(1.0, daylight * cloud * n.sun), 1e-4);
            wv = 0.85 * wv + 0.15 * (n.wind + 0.6 * (noise.uniform() - 0.5));
            w[h] = round_to(std::clamp(wv, 0.02, 0.95), 1e-4);
            const double shape = 0.78 + 0.14 * std::sin(2 * pi * (hod - 9) / 24.0) + 0.08 * noise.uniform();
            d[h] = round_to(n.peak * shape, 0.1);
        }
        dn.push_back("demand_" + n.id);
        sn.push_back("solar_" + n.id);
        wn.push_back("wind_" + n.id);
        dc.push_back(std::move(d));
        sc.push_back(std::move(s));
        wc.push_back(std::move(w));
    }
    write(ts_dir / "demand.csv", series_file(dn, dc, t.hours));
    write(ts_dir / "solar.csv", series_file(sn, sc, t.hours));
    write(ts_dir / "wind.csv", series_file(wn, wc, t.hours));

    fs::create_directories(L.iteration_files() / "iteration_data");
    write(L.iteration_table(), t.iteration_table);
    fs::create_directories(L.model_dir());
    write(L.project_variables(), project_variables(t));
    write(L.features(), features(ids));
    write(L.constraints_list(), constraints_list());
    write(L.reporting_symbols(), reporting_symbols());
}

TemplateSpec minimal()
{
    TemplateSpec t;
    t.nodes = {{"DE", 100, 0.75, 0.35}};
    t.hours = 48;
    t.scenarios = false;
    t.iteration_table = "run\n";
    return t;
}

TemplateSpec example1()
{
    // the twelve countries of the original dataset, shrunk to toy size
    TemplateSpec t;
    t.nodes = {
        {"DE", 80, 0.70, 0.35, false, true}, {"FR", 70, 0.80, 0.30, false, true}, {"DK", 6, 0.60, 0.45},
        {"BE", 13, 0.65, 0.35},              {"NL", 17, 0.65, 0.40},              {"PL", 25, 0.65, 0.35},
        {"CZ", 10, 0.70, 0.25},              {"AT", 10, 0.75, 0.25, true},        {"CH", 9, 0.80, 0.15, true},
        {"ES", 40, 0.95, 0.30, true},        {"IT", 55, 0.90, 0.20},              {"PT", 8, 0.95, 0.30, true},
    };
    t.lines = {{"DE", "FR"}, {"DE", "DK"}, {"DE", "NL"}, {"DE", "PL"}, {"DE", "CZ"}, {"DE", "AT"},
               {"DE", "CH"}, {"FR", "BE"}, {"BE", "NL"}, {"FR", "ES"}, {"ES", "PT"}, {"FR", "IT"},
               {"IT", "CH"}, {"AT", "CZ"}, {"AT", "IT"}, {"FR", "CH"}};
    t.hours = 24;
    t.iteration_table = "run,c_i_sto_e(n,'Li-ion'),c_i_sto_p(n,'Li-ion')\n"
                        "run,[EUR/MWh],[EUR/MW]\n"
                        "S0,20029,15021\n"
                        "S1,10014,7511\n"
                        "S2,5007,3755\n";
    return t;
}

TemplateSpec example2()
{
    TemplateSpec t;
    t.nodes = {{"DE", 80, 0.70, 0.35}, {"FR", 70, 0.80, 0.30}};
    t.lines = {{"DE", "FR"}};
    t.hours = 168;
    t.iteration_table = "run,min_renewable_share('DE'),min_renewable_share('FR')\n"
                        "RES50,0.5,0.4\n"
                        "RES60,0.6,0.5\n"
                        "RES70,0.7,0.6\n"
                        "RES80,0.8,0.7\n";
    return t;
}

} // namespace

std::vector<std::string> template_names() { return {"minimal", "example1", "example2"}; }

void create_project(const fs::path& root, const std::string& template_name)
{
    TemplateSpec spec;
    if (template_name == "minimal") {
        spec = minimal();
    } else if (template_name == "example1") {
        spec = example1();
    } else if (template_name == "example2") {
        spec = example2();
    } else {
        throw ValidationError(fmt::format("unknown template '{}' (choose minimal, example1 or example2)",
                                          template_name));
    }
    if (fs::exists(root)) {
        throw IoError(fmt::format("{}: already exists, refusing to overwrite", root.string()));
    }
    try {
        materialise(root, spec);
    } catch (const std::exception& e) {
        throw IoError(fmt::format("{}: {}", root.string(), e.what()));
    }
}

} // namespace voltaic
