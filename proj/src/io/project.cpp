#include "voltaic/io/project.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <map>
#include <set>

namespace voltaic {

namespace fs = std::filesystem;

std::string ProjectLayout::directory_name(const std::string& configured)
{
    return fs::path(configured).stem().string();
}

namespace {

// Header-addressed view of one CSV file, for error messages with context.
class Table {
public:
    Table(std::string file, std::string_view text) : file_(std::move(file)), rows_(parse_csv(text))
    {
        if (rows_.empty()) {
            throw ValidationError(fmt::format("{}: missing header row", file_));
        }
        for (std::size_t c = 0; c < rows_[0].size(); ++c) {
            index_[rows_[0][c]] = c;
        }
    }

    std::size_t size() const { return rows_.size() - 1; }
    const std::string& file() const { return file_; }
    bool has(const std::string& col) const { return index_.count(col) > 0; }

    std::string text(std::size_t r, const std::string& col, bool required = true) const
    {
        auto it = index_.find(col);
        if (it == index_.end()) {
            if (required) {
                throw ValidationError(fmt::format("{}: missing column '{}'", file_, col));
            }
            return {};
        }
        const auto& row = rows_[r + 1];
        return it->second < row.size() ? row[it->second] : std::string{};
    }

    double number(std::size_t r, const std::string& col, std::optional<double> fallback = std::nullopt) const
    {
        auto cell = text(r, col, !fallback.has_value());
        if (cell.empty()) {
            if (fallback) {
                return *fallback;
            }
            fail(r, col, "is empty");
        }
        auto v = parse_number(cell);
        if (!v) {
            fail(r, col, fmt::format("'{}' is not a number", cell));
        }
        return *v;
    }

    std::optional<double> optional_number(std::size_t r, const std::string& col) const
    {
        auto cell = text(r, col, false);
        if (cell.empty()) {
            return std::nullopt;
        }
        return number(r, col);
    }

    // Rows are numbered like a spreadsheet: the header is row 1.
    [[noreturn]] void fail(std::size_t r, const std::string& col, const std::string& why) const
    {
        throw ValidationError(fmt::format("{}: row {}, column '{}': {}", file_, r + 2, col, why));
    }

    std::string where(std::size_t r) const { return fmt::format("{}: row {}", file_, r + 2); }

    const std::vector<CsvRow>& raw() const { return rows_; }

private:
    std::string file_;
    std::vector<CsvRow> rows_;
    std::map<std::string, std::size_t> index_;
};

std::string read(const fs::path& p)
{
    if (!fs::exists(p)) {
        throw IoError(fmt::format("{}: file not found", p.string()));
    }
    return read_text_file(p.string());
}

std::string rel(const ProjectLayout& layout, const fs::path& p) { return fs::relative(p, layout.root).string(); }

int parse_end_hour(const std::string& v)
{
    std::string s = trim(v);
    if (!s.empty() && (s[0] == 'h' || s[0] == 'H')) {
        s = s.substr(1);
    }
    auto n = parse_number(s);
    if (!n || *n != static_cast<double>(static_cast<int>(*n))) {
        throw ValidationError(fmt::format("project_variables.csv: end_hour: '{}' is not an hour like h8760", v));
    }
    return static_cast<int>(*n);
}

} // namespace

ModelConfig parse_project_variables(std::string_view text, std::vector<std::string>* warnings)
{
    const std::string file = "project_variables.csv";
    ModelConfig cfg;
    std::map<std::string, std::string> kv;
    auto rows = parse_csv(text);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.empty() && to_lower(row[0]) == "variable") {
            continue;
        }
        if (row.size() < 2) {
            throw ValidationError(fmt::format("{}: row {}: expected 'Variable,Value'", file, r + 1));
        }
        kv[row[0]] = row[1];
    }

    std::set<std::string> used;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) {
            return nullptr;
        }
        used.insert(key);
        return &it->second;
    };
    auto flag = [&](const std::string& key, bool& target, bool required) {
        const auto* v = get(key);
        if (!v) {
            if (required) {
                throw ValidationError(fmt::format("{}: missing required key '{}'", file, key));
            }
            return;
        }
        auto b = parse_yes_no(*v);
        if (!b) {
            throw ValidationError(fmt::format("{}: {}: '{}' is not yes/no", file, key, *v));
        }
        target = *b;
    };
    auto integer = [&](const std::string& key, int& target, bool required) {
        const auto* v = get(key);
        if (!v) {
            if (required) {
                throw ValidationError(fmt::format("{}: missing required key '{}'", file, key));
            }
            return;
        }
        auto n = parse_number(*v);
        if (!n || *n != static_cast<double>(static_cast<long>(*n))) {
            throw ValidationError(fmt::format("{}: {}: '{}' is not an integer", file, key, *v));
        }
        target = static_cast<int>(*n);
    };
    auto name = [&](const std::string& key, std::string& target) {
        if (const auto* v = get(key)) {
            target = *v;
        }
    };

    flag("scenarios_iteration", cfg.scenarios_iteration, false);
    flag("skip_input", cfg.skip_input, false);
    flag("skip_iteration_data_file", cfg.skip_iteration_data_file, false);
    integer("base_year", cfg.base_year, true);
    if (const auto* v = get("end_hour")) {
        cfg.end_hour = parse_end_hour(*v);
    } else {
        throw ValidationError(fmt::format("{}: missing required key 'end_hour'", file));
    }
    flag("dispatch_only", cfg.dispatch_only, true);
    flag("network_transfer", cfg.network_transfer, true);
    flag("no_crossover", cfg.no_crossover, false);
    flag("infeasibility", cfg.infeasibility, true);
    flag("GUSS", cfg.guss, false);
    flag("GUSS_parallel", cfg.guss_parallel, false);
    integer("GUSS_parallel_threads", cfg.guss_parallel_threads, false);
    name("data_input_file", cfg.data_input_file);
    name("time_series_file", cfg.time_series_file);
    name("iteration_data_file", cfg.iteration_data_file);
    integer("gdx_convert_parallel_threads", cfg.convert_parallel_threads, false);
    // The three legacy converter switches select the two store formats:
    // csv -> text tables (always written), pickle/vaex -> binary per run.
    bool to_csv = true;
    bool to_pickle = false;
    bool to_vaex = false;
    flag("gdx_convert_to_csv", to_csv, false);
    flag("gdx_convert_to_pickle", to_pickle, false);
    flag("gdx_convert_to_vaex", to_vaex, false);
    cfg.write_text = true;
    cfg.write_binary = to_pickle || to_vaex;
    flag("report_data", cfg.report_data, false);
    if (const auto* v = get("slack_penalty")) {
        auto n = parse_number(*v);
        if (!n) {
            throw ValidationError(fmt::format("{}: slack_penalty: '{}' is not a number", file, *v));
        }
        cfg.slack_penalty = *n;
    }
    if (cfg.convert_parallel_threads < 0) {
        throw ValidationError(fmt::format("{}: field 'gdx_convert_parallel_threads' must be >= 0", file));
    }
    for (const auto& [k, v] : kv) {
        if (!used.count(k) && warnings) {
            warnings->push_back(fmt::format("{}: unknown key '{}' ignored", file, k));
        }
    }
    try {
        validate_config(cfg);
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: {}", file, e.what()));
    }
    return cfg;
}

FeatureMatrix parse_features(std::string_view text, const std::vector<std::string>& nodes)
{
    const std::string file = "features_node_selection.csv";
    FeatureMatrix fm = FeatureMatrix::all_off(nodes);
    auto rows = parse_csv(text);
    if (rows.empty()) {
        return fm;
    }
    const auto& header = rows[0];
    std::vector<int> node_pos;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto it = std::find(nodes.begin(), nodes.end(), header[c]);
        if (it == nodes.end()) {
            throw ValidationError(fmt::format("{}: column '{}' is not a node of the model", file, header[c]));
        }
        node_pos.push_back(static_cast<int>(it - nodes.begin()));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto& module = row[0];
        auto known = std::find_if(feature_modules.begin(), feature_modules.end(),
                                  [&](const char* m) { return module == m; });
        if (known == feature_modules.end()) {
            throw ValidationError(fmt::format("{}: row {}: unknown module '{}'", file, r, module));
        }
        for (std::size_t c = 1; c < row.size() && c < header.size(); ++c) {
            const auto& cell = row[c];
            if (cell != "0" && cell != "1") {
                throw ValidationError(
                    fmt::format("{}: row {}, column '{}': '{}' must be 0 or 1", file, r, header[c], cell));
            }
            fm.flags[module][node_pos[c - 1]] = cell == "1" ? 1 : 0;
        }
    }
    return fm;
}

std::vector<ReportingEntry> parse_reporting_symbols(std::string_view text)
{
    std::vector<ReportingEntry> out;
    auto rows = parse_csv(text);
    std::set<std::pair<std::string, ValueKind>> seen;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && to_lower(row[0]) == "symbol") {
            continue;
        }
        if (row[0].empty()) {
            continue;
        }
        ReportingEntry e{row[0], ValueKind::level};
        if (row.size() > 1 && !row[1].empty()) {
            auto k = parse_value_kind(row[1]);
            if (!k || *k == ValueKind::parameter) {
                throw ValidationError(fmt::format("reporting_symbols.csv: row {}: kind '{}' must be level or marginal",
                                                  r + 1, row[1]));
            }
            e.kind = *k;
        }
        if (seen.insert({e.symbol, e.kind}).second) {
            out.push_back(e);
        }
    }
    return out;
}

ConstraintChoices parse_constraints_list(std::string_view text)
{
    const std::string file = "constraints_list.csv";
    ConstraintChoices choices;
    auto rows = parse_csv(text);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && to_lower(row[0]) == "constraint") {
            continue;
        }
        const auto& blocks = constraint_blocks();
        auto it = std::find_if(blocks.begin(), blocks.end(), [&](const ConstraintBlock& b) { return b.name == row[0]; });
        if (it == blocks.end()) {
            throw ValidationError(fmt::format("{}: row {}: unknown constraint block '{}'", file, r + 1, row[0]));
        }
        if (row.size() > 1) {
            for (const auto& c : split(row[1], ';')) {
                auto choice = to_lower(trim(c));
                if (!choice.empty() && std::find(it->choices.begin(), it->choices.end(), choice) == it->choices.end()) {
                    throw ValidationError(
                        fmt::format("{}: row {}: block '{}' has no choice '{}'", file, r + 1, row[0], choice));
                }
            }
        }
        if (row.size() > 2 && !row[2].empty()) {
            try {
                set_constraint_choice(choices, row[0], row[2]);
            } catch (const ValidationError& e) {
                throw ValidationError(fmt::format("{}: row {}: {}", file, r + 1, e.what()));
            }
        }
    }
    return choices;
}

void load_series_directory(const fs::path& dir, int hours, std::map<std::string, TimeSeries>& out)
{
    if (!fs::is_directory(dir)) {
        throw IoError(fmt::format("{}: directory not found", dir.string()));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const std::string name = f.filename().string();
        Table t(name, read(f));
        const auto& header = t.raw()[0];
        if (header.empty() || header[0] != "hour") {
            throw ValidationError(fmt::format("{}: first column must be 'hour'", name));
        }
        if (t.size() != static_cast<std::size_t>(hours)) {
            throw ValidationError(fmt::format("{}: {} hourly rows, end_hour requires {}", name, t.size(), hours));
        }
        for (std::size_t r = 0; r < t.size(); ++r) {
            auto label = t.text(r, "hour");
            if (label != hour_label(r + 1) && label != std::to_string(r + 1)) {
                t.fail(r, "hour", fmt::format("expected {} , got '{}'", hour_label(r + 1), label));
            }
        }
        for (std::size_t c = 1; c < header.size(); ++c) {
            const auto& s = header[c];
            if (s.empty()) {
                throw ValidationError(fmt::format("{}: column {} has no series name", name, c + 1));
            }
            if (out.count(s)) {
                throw ValidationError(fmt::format("{}: series '{}' is defined more than once", name, s));
            }
            TimeSeries ts{s, {}};
            ts.values.reserve(t.size());
            for (std::size_t r = 0; r < t.size(); ++r) {
                ts.values.push_back(t.number(r, s));
            }
            out.emplace(s, std::move(ts));
        }
    }
}

namespace {

struct Origins {
    // "node 'DE'" -> "data_input/static_input/nodes.csv: row 2"
    std::vector<std::pair<std::string, std::string>> entries;

    std::string locate(const std::string& message) const
    {
        const std::pair<std::string, std::string>* best = nullptr;
        for (const auto& e : entries) {
            if (message.compare(0, e.first.size(), e.first) == 0 && (!best || e.first.size() > best->first.size())) {
                best = &e;
            }
        }
        return best ? best->second + ": " : std::string{};
    }
};

void load_static(const ProjectLayout& layout, const ModelConfig& cfg, SystemData& data, Origins& origins)
{
    const auto dir = layout.data_input() / ProjectLayout::directory_name(cfg.data_input_file);
    if (!fs::is_directory(dir)) {
        throw IoError(fmt::format("{}: directory not found", rel(layout, dir)));
    }
    {
        auto p = dir / "nodes.csv";
        Table t(rel(layout, p), read(p));
        for (std::size_t r = 0; r < t.size(); ++r) {
            Node n;
            n.id = t.text(r, "id");
            n.demand_series = t.text(r, "demand");
            n.min_renewable_share = t.number(r, "min_renewable_share", 0.0);
            n.co2_cap = t.optional_number(r, "co2_cap");
            origins.entries.push_back({fmt::format("node '{}'", n.id), t.where(r)});
            data.nodes.push_back(std::move(n));
        }
    }
    {
        auto p = dir / "technologies.csv";
        Table t(rel(layout, p), read(p));
        for (std::size_t r = 0; r < t.size(); ++r) {
            Technology x;
            x.id = t.text(r, "id");
            x.node = t.text(r, "node");
            auto kind = parse_tech_kind(t.text(r, "kind"));
            if (!kind) {
                t.fail(r, "kind", "must be dispatchable or variable_renewable");
            }
            x.kind = *kind;
            x.c_inv_power = t.number(r, "c_inv_power", 0.0);
            x.c_fix = t.number(r, "c_fix", 0.0);
            x.c_var = t.number(r, "c_var", 0.0);
            x.co2_intensity = t.number(r, "co2_intensity", 0.0);
            x.cap_min = t.number(r, "cap_min", 0.0);
            x.cap_max = t.number(r, "cap_max");
            x.availability_series = t.text(r, "availability", false);
            origins.entries.push_back({fmt::format("technology '{}' at node '{}'", x.id, x.node), t.where(r)});
            data.technologies.push_back(std::move(x));
        }
    }
    if (auto p = dir / "storage.csv"; fs::exists(p)) {
        Table t(rel(layout, p), read(p));
        for (std::size_t r = 0; r < t.size(); ++r) {
            StorageTech s;
            s.id = t.text(r, "id");
            s.node = t.text(r, "node");
            s.c_i_sto_e = t.number(r, "c_i_sto_e", 0.0);
            s.c_i_sto_p = t.number(r, "c_i_sto_p", 0.0);
            s.c_fix_sto = t.number(r, "c_fix_sto", 0.0);
            s.c_var_sto = t.number(r, "c_var_sto", 0.0);
            s.eta_in = t.number(r, "eta_in", 1.0);
            s.eta_out = t.number(r, "eta_out", 1.0);
            s.e_min = t.number(r, "e_min", 0.0);
            s.e_max = t.number(r, "e_max");
            s.p_min = t.number(r, "p_min", 0.0);
            s.p_max = t.number(r, "p_max");
            origins.entries.push_back({fmt::format("storage '{}' at node '{}'", s.id, s.node), t.where(r)});
            data.storages.push_back(std::move(s));
        }
    }
    if (auto p = dir / "lines.csv"; fs::exists(p)) {
        Table t(rel(layout, p), read(p));
        for (std::size_t r = 0; r < t.size(); ++r) {
            Line l;
            l.id = t.text(r, "id");
            l.from_node = t.text(r, "from_node");
            l.to_node = t.text(r, "to_node");
            l.ntc_existing = t.number(r, "ntc_existing", 0.0);
            l.ntc_max = t.number(r, "ntc_max");
            l.c_inv_ntc = t.number(r, "c_inv_ntc", 0.0);
            l.loss_factor = t.number(r, "loss_factor", 0.0);
            origins.entries.push_back({fmt::format("line '{}'", l.id), t.where(r)});
            data.lines.push_back(std::move(l));
        }
    }
    if (auto p = dir / "fixed_capacities.csv"; fs::exists(p)) {
        Table t(rel(layout, p), read(p));
        for (std::size_t r = 0; r < t.size(); ++r) {
            auto sym = t.text(r, "symbol");
            Tuple dom{t.text(r, "element")};
            if (sym != "NTC") {
                dom.push_back(t.text(r, "node"));
            }
            if (sym != "N" && sym != "N_STO_E" && sym != "N_STO_P" && sym != "NTC") {
                t.fail(r, "symbol", fmt::format("'{}' is not a capacity (N, N_STO_E, N_STO_P, NTC)", sym));
            }
            data.fixed_capacities[{sym, dom}] = t.number(r, "value");
        }
    }
}

} // namespace

Project load_project(const fs::path& root)
{
    Project p;
    p.layout.root = root;
    const auto& L = p.layout;
    if (!fs::is_directory(root)) {
        throw IoError(fmt::format("{}: project directory not found", root.string()));
    }
    p.config = parse_project_variables(read(L.project_variables()), &p.warnings);

    Origins origins;
    load_static(L, p.config, p.data, origins);
    const auto ts_dir = L.data_input() / ProjectLayout::directory_name(p.config.time_series_file);
    load_series_directory(ts_dir, p.config.end_hour, p.data.series);
    const auto it_dir = L.iteration_files() / ProjectLayout::directory_name(p.config.iteration_data_file);
    if (p.config.scenarios_iteration && !p.config.skip_iteration_data_file && fs::is_directory(it_dir)) {
        load_series_directory(it_dir, p.config.end_hour, p.data.series);
    }
    try {
        validate_system(p.data, p.config);
    } catch (const ValidationError& e) {
        throw ValidationError(origins.locate(e.what()) + e.what());
    }
    for (const auto& [key, v] : p.data.fixed_capacities) {
        bool known = key.first == "NTC" ? p.data.find_line(key.second[0]) != nullptr
                     : key.first == "N" ? p.data.find_technology(key.second[0], key.second[1]) != nullptr
                                        : p.data.find_storage(key.second[0], key.second[1]) != nullptr;
        if (!known) {
            throw ValidationError(fmt::format("fixed_capacities.csv: {} refers to nothing in the data",
                                              LinearProgram::key(key.first, key.second)));
        }
    }

    p.features = parse_features(read(L.features()), p.data.node_ids());
    if (auto active = p.features.first_active()) {
        throw ValidationError(fmt::format("features_node_selection.csv: module '{}' is active for node '{}'; "
                                          "only the basic module is supported",
                                          active->first, active->second));
    }
    p.reporting = parse_reporting_symbols(read(L.reporting_symbols()));
    p.choices = fs::exists(L.constraints_list()) ? parse_constraints_list(read(L.constraints_list()))
                                                  : ConstraintChoices{};

    if (p.config.scenarios_iteration) {
        try {
            p.scenarios = parse_iteration_table(read(L.iteration_table()));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("iterationfiles/iteration_table.csv: {}", e.what()));
        }
    }
    if (p.scenarios.empty()) {
        p.scenarios.push_back(ScenarioSpec{"base", {}, std::nullopt, {}});
    }
    return p;
}

} // namespace voltaic
