// Small hand-built systems shared by the test binaries.
#pragma once

#include "voltaic/model/builder.hpp"
#include "voltaic/model/types.hpp"
#include "voltaic/solver/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

namespace toy {

using namespace voltaic;

inline ModelConfig config(int hours)
{
    ModelConfig c;
    c.end_hour = hours;
    c.infeasibility = false;
    c.network_transfer = true;
    return c;
}

inline void series(SystemData& d, const std::string& name, std::vector<double> values)
{
    d.series[name] = TimeSeries{name, std::move(values)};
}

inline Node& node(SystemData& d, const std::string& id, std::vector<double> demand)
{
    series(d, "d_" + id, std::move(demand));
    d.nodes.push_back(Node{id, "d_" + id, 0.0, std::nullopt});
    return d.nodes.back();
}

inline Technology& disp(SystemData& d, const std::string& id, const std::string& at, double c_var, double cap_min,
                        double cap_max, double c_inv = 0.0)
{
    Technology t;
    t.id = id;
    t.node = at;
    t.kind = TechKind::dispatchable;
    t.c_var = c_var;
    t.cap_min = cap_min;
    t.cap_max = cap_max;
    t.c_inv_power = c_inv;
    d.technologies.push_back(t);
    return d.technologies.back();
}

inline Technology& vre(SystemData& d, const std::string& id, const std::string& at, std::vector<double> phi,
                       double c_inv, double cap_max, double cap_min = 0.0)
{
    Technology t;
    t.id = id;
    t.node = at;
    t.kind = TechKind::variable_renewable;
    t.c_inv_power = c_inv;
    t.cap_min = cap_min;
    t.cap_max = cap_max;
    t.availability_series = id + "_" + at;
    series(d, t.availability_series, std::move(phi));
    d.technologies.push_back(t);
    return d.technologies.back();
}

inline StorageTech& storage(SystemData& d, const std::string& id, const std::string& at, double c_e, double c_p,
                            double eta_in, double eta_out, double e_max, double p_max)
{
    StorageTech s;
    s.id = id;
    s.node = at;
    s.c_i_sto_e = c_e;
    s.c_i_sto_p = c_p;
    s.eta_in = eta_in;
    s.eta_out = eta_out;
    s.e_max = e_max;
    s.p_max = p_max;
    d.storages.push_back(s);
    return d.storages.back();
}

inline Line& line(SystemData& d, const std::string& id, const std::string& from, const std::string& to,
                  double ntc_existing, double ntc_max, double c_inv = 0.0, double loss = 0.0)
{
    d.lines.push_back(Line{id, from, to, ntc_existing, ntc_max, c_inv, loss});
    return d.lines.back();
}

inline FeatureMatrix features(const SystemData& d) { return FeatureMatrix::all_off(d.node_ids()); }

inline double level(const LinearProgram& lp, const Solution& s, const std::string& name, const Tuple& dom)
{
    return s.primal.at(static_cast<std::size_t>(lp.find_column(name, dom).value()));
}

inline double hourly(const LinearProgram& lp, const Solution& s, const std::string& name, Tuple prefix, int h)
{
    prefix.push_back(hour_label(static_cast<std::size_t>(h)));
    return level(lp, s, name, prefix);
}

/// 1 node, H=3, demand 10/20/30; base 15 MW at 10 EUR/MWh, peak 20 MW at
/// 50 EUR/MWh, capacities fixed.
inline SystemData merit_order()
{
    SystemData d;
    node(d, "DE", {10, 20, 30});
    disp(d, "base", "DE", 10, 15, 15);
    disp(d, "peak", "DE", 50, 20, 20);
    return d;
}

/// Solar + Li-ion + gas on one node over `days` days; the Li-ion costs
/// are the storage sweep's subject.
inline SystemData solar_battery_gas(int days = 2, double gas_cost = 80)
{
    SystemData d;
    std::vector<double> demand, sun;
    for (int h = 0; h < 24 * days; ++h) {
        int hod = h % 24;
        demand.push_back(60 + 25 * (hod >= 17 && hod <= 22 ? 1 : 0) + (h % 5));
        double s = hod >= 6 && hod <= 18 ? 1.0 - std::abs(hod - 12) / 7.0 : 0.0;
        sun.push_back(std::round(s * 1e4) / 1e4);
    }
    node(d, "DE", demand);
    disp(d, "gas", "DE", gas_cost, 0, 200, 45000);
    vre(d, "solar", "DE", sun, 38000, 1000);
    storage(d, "Li-ion", "DE", 20029, 15021, 0.95, 0.95, 5000, 500);
    return d;
}

/// Two nodes with gas, wind, solar and storage; profiles from `seed`.
inline SystemData two_node(unsigned seed, int hours)
{
    std::mt19937 rng(seed);
    auto u = [&] { return static_cast<double>(rng()) / 4294967296.0; };
    SystemData d;
    for (std::string n : {"DE", "FR"}) {
        std::vector<double> dem, sun, wind;
        double w = 0.4;
        for (int h = 0; h < hours; ++h) {
            int hod = h % 24;
            dem.push_back(std::round((50 + 20 * std::sin(hod / 24.0 * 6.283) + 10 * u()) * 10) / 10);
            double s = hod >= 6 && hod <= 18 ? std::sin((hod - 6) / 12.0 * 3.14159) : 0.0;
            sun.push_back(std::round(s * (0.6 + 0.4 * u()) * 1e4) / 1e4);
            w = std::clamp(0.8 * w + 0.2 * u(), 0.0, 1.0);
            wind.push_back(std::round(w * 1e4) / 1e4);
        }
        node(d, n, dem);
        disp(d, "gas", n, 70 + 10 * u(), 0, 150, 40000);
        vre(d, "solar", n, sun, 35000 + 5000 * u(), 400);
        vre(d, "wind", n, wind, 80000 + 10000 * u(), 400);
        storage(d, "Li-ion", n, 20029, 15021, 0.95, 0.95, 2000, 200);
    }
    line(d, "DE-FR", "DE", "FR", 10, 100, 20000, 0.0);
    return d;
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
    {
        path = std::filesystem::temp_directory_path() / ("voltaic_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

} // namespace toy
