#include "voltaic/postproc/rldc.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/core.h>
#include <limits>
#include <stdexcept>

namespace voltaic {

std::map<std::string, double> hourly_profile(const Symbol& s, const std::string& node, const std::string& run)
{
    int h = s.dim_index("h");
    if (h < 0) {
        throw std::invalid_argument(fmt::format("symbol '{}' has no hour dim", s.name));
    }
    int n = s.dim_index("n");
    int r = s.dim_index("run");
    std::map<std::string, double> out;
    for (const auto& [key, v] : s.records) {
        if ((n >= 0 && key[n] != node) || (r >= 0 && key[r] != run)) {
            continue;
        }
        out[key[h]] += v;
    }
    return out;
}

long hour_number(const std::string& label)
{
    std::size_t i = 0;
    while (i < label.size() && !std::isdigit(static_cast<unsigned char>(label[i]))) {
        ++i;
    }
    if (i == label.size()) {
        return std::numeric_limits<long>::max();
    }
    return std::strtol(label.c_str() + i, nullptr, 10);
}

namespace {

std::vector<double> aligned(const std::map<std::string, double>& profile, const std::vector<std::string>& hours,
                            const std::string& what)
{
    std::vector<double> out(hours.size(), 0.0);
    if (profile.empty()) {
        return out;
    }
    for (std::size_t i = 0; i < hours.size(); ++i) {
        auto it = profile.find(hours[i]);
        if (it == profile.end()) {
            throw std::invalid_argument(fmt::format("rldc: '{}' has no value for hour {}", what, hours[i]));
        }
        out[i] = it->second;
    }
    return out;
}

} // namespace

RldcTable rldc(const Symbol& demand, const Symbol& vre_gen, const std::string& node, const std::string& run,
               const std::vector<RldcOverlay>& overlays)
{
    auto d = hourly_profile(demand, node, run);
    if (d.empty()) {
        throw std::invalid_argument(fmt::format("rldc: no demand hours for node {} run {}", node, run));
    }
    std::vector<std::string> hours;
    for (const auto& [h, v] : d) {
        hours.push_back(h);
    }
    std::vector<double> dem;
    for (const auto& h : hours) {
        dem.push_back(d[h]);
    }
    auto vre = aligned(hourly_profile(vre_gen, node, run), hours, vre_gen.name);
    std::vector<std::vector<double>> extra;
    RldcTable table;
    table.node = node;
    table.run = run;
    for (const auto& o : overlays) {
        table.overlay_names.push_back(o.name);
        extra.push_back(aligned(hourly_profile(o.symbol, node, run), hours, o.name));
    }

    std::vector<std::size_t> order(hours.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::vector<double> residual(hours.size());
    for (std::size_t i = 0; i < hours.size(); ++i) {
        residual[i] = dem[i] - vre[i];
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (residual[a] != residual[b]) {
            return residual[a] > residual[b];
        }
        long ha = hour_number(hours[a]);
        long hb = hour_number(hours[b]);
        return ha != hb ? ha < hb : hours[a] < hours[b];
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t i = order[k];
        RldcRow row;
        row.rank = k + 1;
        row.hour = hours[i];
        row.residual = residual[i];
        row.demand = dem[i];
        row.vre = vre[i];
        for (const auto& e : extra) {
            row.overlays.push_back(e[i]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace voltaic
