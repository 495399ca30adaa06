// Acceptance checks: one PASS/FAIL/SKIP line per criterion.
//   acceptance             every criterion
//   acceptance --mps-only  only the external MPS cross-check (exit 77 = skipped)

#include "symbol_oracle.hpp"
#include "toy.hpp"
#include "voltaic/cli/cli.hpp"
#include "voltaic/common/csv.hpp"
#include "voltaic/io/extract.hpp"
#include "voltaic/io/project.hpp"
#include "voltaic/io/store.hpp"
#include "voltaic/postproc/rldc.hpp"
#include "voltaic/scenario/runner.hpp"
#include "voltaic/solver/certificates.hpp"
#include "voltaic/solver/mps.hpp"

#include <chrono>
#include <cstdlib>
#include <fmt/core.h>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace voltaic;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict = Verdict::pass;
    std::string detail;
};

// Collects failure reasons; the first few are reported.
struct Check {
    std::vector<std::string> problems;
    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            problems.push_back(what);
        }
    }
    Outcome outcome(const std::string& detail) const
    {
        if (problems.empty()) {
            return {Verdict::pass, detail};
        }
        std::string msg = problems[0];
        if (problems.size() > 1) {
            msg += fmt::format(" (+{} more)", problems.size() - 1);
        }
        return {Verdict::fail, msg};
    }
};

// Every optimal solve the criteria make, for the certificate criterion.
struct SolveRecord {
    std::string label;
    LinearProgram lp;
    Solution solution;
    SystemData data;
};
std::vector<SolveRecord> solves;

void record(const std::string& label, const LinearProgram& lp, const Solution& s, const SystemData& d)
{
    if (s.optimal()) {
        solves.push_back({label, lp, s, d});
    }
}

void record(const std::string& label, const std::vector<RunResult>& results)
{
    for (const auto& r : results) {
        if (r.ok()) {
            LinearProgram lp = *r.program;
            lp.apply(r.deltas);
            record(label + "/" + r.run_id, lp, r.solution, r.inputs.data);
        }
    }
}

ScenarioBase base_of(SystemData d, int hours)
{
    ScenarioBase b;
    b.features = toy::features(d);
    b.data = std::move(d);
    b.config = toy::config(hours);
    return b;
}

ScenarioBase base_of(const Project& p) { return {p.data, p.config, p.features, p.choices}; }

std::vector<RunResult> run(const std::vector<ScenarioSpec>& specs, const ScenarioBase& base, RunMode mode,
                           std::size_t threads = 2)
{
    RunOptions opt;
    opt.mode = mode;
    opt.threads = threads;
    return run_scenarios(specs, base, opt);
}

std::map<std::string, std::string> tree(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    if (!fs::exists(dir)) {
        return out;
    }
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            out[fs::relative(e.path(), dir).string()] = read_text_file(e.path().string());
        }
    }
    return out;
}

void write_stores(const std::vector<SymbolStore>& stores, const fs::path& dir, StoreFormats f)
{
    for (const auto& s : stores) {
        write_store(s, dir, f);
    }
}

const char* storage_table = "run,c_i_sto_e(n,'Li-ion'),c_i_sto_p(n,'Li-ion')\n"
                            "run,[EUR/MWh],[EUR/MW]\n"
                            "S0,20029,15021\n"
                            "S1,10014,7511\n"
                            "S2,5007,3755\n";

// 1 --------------------------------------------------------------------------
Outcome merit_order()
{
    Check c;
    auto d = toy::merit_order();
    auto cfg = toy::config(3);
    auto lp = build_model(d, cfg, toy::features(d));
    auto s = solve(lp);
    c.expect(s.optimal(), "not optimal");
    if (!s.optimal()) {
        return c.outcome("");
    }
    record("merit-order", lp, s, d);
    c.expect(std::abs(s.objective - 1400) <= 1e-6, fmt::format("objective {}", s.objective));
    const double base[] = {10, 15, 15};
    const double peak[] = {0, 5, 15};
    for (int h = 1; h <= 3; ++h) {
        double b = toy::hourly(lp, s, "G", {"base", "DE"}, h);
        double p = toy::hourly(lp, s, "G", {"peak", "DE"}, h);
        c.expect(std::abs(b - base[h - 1]) <= 1e-6, fmt::format("base h{} = {}", h, b));
        c.expect(std::abs(p - peak[h - 1]) <= 1e-6, fmt::format("peak h{} = {}", h, p));
    }
    return c.outcome(fmt::format("objective {}", format_significant(s.objective, 10)));
}

// 2 --------------------------------------------------------------------------
std::vector<ScenarioSpec> random_sweep(unsigned seed, int runs)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    auto maybe = [&](const std::string& v) { return u(rng) < 0.5 ? v : std::string(); };
    std::string text = "run,c_var(n,'gas'),c_i_sto_e(n,'Li-ion'),min_renewable_share('DE'),N.up('wind',n),"
                       "c_inv_ntc('DE-FR'),country_set,ntc_expansion\n";
    const char* sets[] = {"DE", "FR", "DE;FR"};
    for (int r = 0; r < runs; ++r) {
        text += fmt::format("R{},{},{},{},{},{},{},{}\n", r, maybe(format_significant(40 + 80 * u(rng), 6)),
                            maybe(format_significant(5000 + 20000 * u(rng), 6)),
                            maybe(format_significant(0.6 * u(rng), 3)), maybe(format_significant(400 * u(rng), 4)),
                            maybe(format_significant(40000 * u(rng), 5)), u(rng) < 0.3 ? sets[rng() % 3] : "",
                            u(rng) < 0.2 ? "off" : "");
    }
    return parse_iteration_table(text);
}

// Returns the single-instance results.
std::vector<RunResult> compare_modes(Check& c, const std::string& label, const std::vector<ScenarioSpec>& specs,
                                     const ScenarioBase& base)
{
    std::vector<std::vector<RunResult>> all;
    for (auto mode : {RunMode::rebuild, RunMode::single_instance, RunMode::parallel}) {
        all.push_back(run(specs, base, mode));
        record(label + "/" + to_string(mode), all.back());
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        c.expect(all[0][i].ok(), fmt::format("{} {}: rebuild {}", label, specs[i].run_id, all[0][i].status_text()));
        for (std::size_t m = 1; m < all.size(); ++m) {
            c.expect(all[m][i].ok() == all[0][i].ok() && all[m][i].run_id == specs[i].run_id,
                     fmt::format("{} {}: status differs between modes", label, specs[i].run_id));
            if (all[m][i].ok() && all[0][i].ok()) {
                double d = rel(all[m][i].solution.objective, all[0][i].solution.objective);
                c.expect(d <= 1e-6, fmt::format("{} {}: objectives differ by {:.2e}", label, specs[i].run_id, d));
            }
        }
    }
    return std::move(all[1]);
}

Outcome mode_equivalence()
{
    Check c;
    auto t0 = Clock::now();
    toy::TempDir dir("acc_modes");
    create_project(dir.path / "e1", "example1");
    auto project = load_project(dir.path / "e1");
    auto base = base_of(project);
    auto results = compare_modes(c, "example1", project.scenarios, base);
    compare_modes(c, "sweep", random_sweep(20240611, 10), base_of(toy::two_node(31, 48), 48));

    // stores do not depend on the extraction thread count
    std::vector<std::string> files;
    for (std::size_t threads : {1, 2, 4}) {
        auto ex = extract_symbols(results, project.reporting, threads);
        auto out = dir.path / fmt::format("t{}", threads);
        write_stores(ex.stores, out, {true, true});
        auto t = tree(out);
        std::string all;
        for (const auto& [k, v] : t) {
            all += k + '\0' + v + '\0';
        }
        files.push_back(all);
    }
    c.expect(files[0] == files[1] && files[0] == files[2], "stores differ across thread counts");
    double secs = seconds_since(t0);
    c.expect(secs < 60, fmt::format("took {:.1f} s", secs));
    return c.outcome(fmt::format("3 + 10 runs in 3 modes, {:.1f} s", secs));
}

// 3 --------------------------------------------------------------------------
Outcome storage_sweep()
{
    Check c;
    // gas cheap enough that S0 barely builds batteries
    auto base = base_of(toy::solar_battery_gas(2, 25), 48);
    auto res = run(parse_iteration_table(storage_table), base, RunMode::single_instance);
    record("storage-sweep", res);
    std::vector<double> obj, sto, pv;
    for (const auto& r : res) {
        c.expect(r.ok(), fmt::format("{} {}", r.run_id, r.status_text()));
        if (!r.ok()) {
            return c.outcome("");
        }
        const auto& lp = *r.program;
        obj.push_back(r.solution.objective);
        sto.push_back(r.solution.primal[lp.find_column("N_STO_P", {"Li-ion", "DE"}).value()]);
        pv.push_back(r.solution.primal[lp.find_column("N", {"solar", "DE"}).value()]);
    }
    for (std::size_t i = 1; i < res.size(); ++i) {
        c.expect(obj[i] <= obj[i - 1] + 1e-7, fmt::format("objective rises at {}", res[i].run_id));
        c.expect(sto[i] >= sto[i - 1] - 1e-7, fmt::format("Li-ion power falls at {}", res[i].run_id));
        c.expect(pv[i] >= pv[i - 1] - 1e-7, fmt::format("solar capacity falls at {}", res[i].run_id));
    }
    return c.outcome(fmt::format("objective {} -> {}, Li-ion {} -> {} MW, solar {} -> {} MW",
                                 format_significant(obj.front(), 7), format_significant(obj.back(), 7),
                                 format_significant(sto.front(), 4), format_significant(sto.back(), 4),
                                 format_significant(pv.front(), 4), format_significant(pv.back(), 4)));
}

// 4 --------------------------------------------------------------------------
Outcome renewable_sweep()
{
    Check c;
    auto t0 = Clock::now();
    toy::TempDir dir("acc_res");
    create_project(dir.path / "e2", "example2");
    auto project = load_project(dir.path / "e2");
    c.expect(project.config.end_hour == 168 && project.data.nodes.size() == 2, "unexpected example2 shape");
    c.expect(project.scenarios.size() == 4, "expected four runs");
    auto res = run(project.scenarios, base_of(project), mode_from_config(project.config));
    record("renewable-sweep", res);
    std::string objs;
    for (std::size_t i = 0; i < res.size(); ++i) {
        c.expect(res[i].ok(), fmt::format("{} {}", res[i].run_id, res[i].status_text()));
        if (i > 0 && res[i].ok() && res[i - 1].ok()) {
            c.expect(res[i].solution.objective >= res[i - 1].solution.objective - 1e-7,
                     fmt::format("objective falls at {}", res[i].run_id));
        }
        objs += (i ? " " : "") + format_significant(res[i].solution.objective, 7);
    }
    double secs = seconds_since(t0);
    c.expect(secs < 300, fmt::format("took {:.1f} s", secs));
    return c.outcome(fmt::format("objectives {}; {:.1f} s", objs, secs));
}

// 5 --------------------------------------------------------------------------
Outcome certificates()
{
    Check c;
    double worst_primal = 0, worst_gap = 0, worst_tele = 0, worst_bal = 0;
    for (const auto& s : solves) {
        auto cert = verify(s.lp, s.solution);
        worst_primal = std::max({worst_primal, cert.primal_residual, cert.bound_violation});
        worst_gap = std::max(worst_gap, cert.duality_gap);
        c.expect(cert.ok(), s.label + ": " + cert.summary());

        const auto activity = s.lp.row_activity(s.solution.primal);
        for (int row : s.lp.rows_of("BAL")) {
            const auto& r = s.lp.rows()[static_cast<std::size_t>(row)];
            double res = std::abs(activity[static_cast<std::size_t>(row)] - r.rhs);
            worst_bal = std::max(worst_bal, res);
            c.expect(res <= 1e-6, fmt::format("{}: balance {} off by {:.2e}", s.label, LinearProgram::key(r.name, r.domain), res));
        }
        // cyclic storage: what goes in (after losses) comes out over the horizon
        for (int col : s.lp.columns_of("N_STO_E")) {
            const auto& dom = s.lp.columns()[static_cast<std::size_t>(col)].domain;
            const auto* st = s.data.find_storage(dom[0], dom[1]);
            if (!st) {
                continue;
            }
            double net = 0, volume = 0;
            for (const auto& sym : s.lp.columns_of("STO_IN")) {
                const auto& cd = s.lp.columns()[static_cast<std::size_t>(sym)].domain;
                if (cd[0] != dom[0] || cd[1] != dom[1]) {
                    continue;
                }
                double in = s.solution.primal[static_cast<std::size_t>(sym)];
                double out = s.solution.primal[static_cast<std::size_t>(
                    s.lp.find_column("STO_OUT", cd).value())];
                net += st->eta_in * in - out / st->eta_out;
                volume += in;
            }
            double tele = std::abs(net) / std::max(1.0, volume);
            worst_tele = std::max(worst_tele, tele);
            c.expect(tele <= 1e-6, fmt::format("{}: storage {} {} telescoping {:.2e}", s.label, dom[0], dom[1], tele));
        }
    }
    c.expect(!solves.empty(), "no solves recorded");
    return c.outcome(fmt::format("{} solves; worst primal {:.1e}, gap {:.1e}, telescoping {:.1e}, balance {:.1e}",
                                 solves.size(), worst_primal, worst_gap, worst_tele, worst_bal));
}

// 6 --------------------------------------------------------------------------
Outcome symbol_algebra()
{
    Check c;
    std::mt19937 rng(777);
    for (int t = 0; t < 1000; ++t) {
        auto k = oracle::random_case(rng);
        c.expect(binop(k.a, k.b, k.op).symbol.records == oracle::binop(k.a, k.b, k.op),
                 fmt::format("case {} differs from the oracle", t));
        auto zero = k.a - k.a;
        c.expect(zero.size() == k.a.size(), fmt::format("case {}: a - a drops keys", t));
        for (const auto& [key, v] : zero.records) {
            c.expect(v == 0.0, fmt::format("case {}: a - a not zero", t));
        }
    }
    std::uniform_real_distribution<double> u(0, 100);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        Symbol d, g;
        d.dims = {"n", "h"};
        g.dims = {"tech", "n", "h"};
        double expect = 0;
        for (std::size_t h = 1; h <= 300; ++h) {
            double dv = u(rng), sv = u(rng), wv = u(rng);
            d.set({"DE", hour_label(h)}, dv);
            g.set({"solar", "DE", hour_label(h)}, sv);
            g.set({"wind", "DE", hour_label(h)}, wv);
            expect += dv - sv - wv;
        }
        auto curve = rldc(d, g, "DE", "");
        double sum = 0;
        for (const auto& r : curve.rows) {
            sum += r.residual;
        }
        double err = std::abs(sum - expect) / std::max(1.0, std::abs(expect));
        worst = std::max(worst, err);
        c.expect(err <= 1e-9, fmt::format("rldc sum off by {:.2e}", err));
    }
    return c.outcome(fmt::format("1000 binop cases; rldc conservation {:.1e}", worst));
}

// 7 --------------------------------------------------------------------------
Outcome round_trip()
{
    Check c;
    toy::TempDir dir("acc_roundtrip");
    auto base = base_of(toy::two_node(3, 48), 48);
    auto res = run(random_sweep(99, 4), base, RunMode::single_instance);
    std::vector<ReportingEntry> entries = {{"N", ValueKind::level},        {"G", ValueKind::level},
                                           {"STO_L", ValueKind::level},    {"F", ValueKind::level},
                                           {"BAL", ValueKind::marginal},   {"N", ValueKind::marginal},
                                           {"d", ValueKind::level},        {"phi", ValueKind::level}};
    auto ex = extract_symbols(res, entries, 2);
    write_stores(ex.stores, dir.path / "stores", {true, true});
    for (const auto& st : ex.stores) {
        for (auto format : {StoreFormat::text, StoreFormat::binary}) {
            auto back = read_store(dir.path / "stores" / st.run_id, format);
            const char* fname = format == StoreFormat::text ? "text" : "binary";
            c.expect(back.symbols.size() == st.symbols.size(), fmt::format("{} {}: symbol count", st.run_id, fname));
            for (const auto& [key, s] : st.symbols) {
                auto it = back.symbols.find(key);
                bool same = it != back.symbols.end() && it->second.same_content(s) && it->second.kind == s.kind &&
                            it->second.unit == s.unit;
                c.expect(same, fmt::format("{} {}: {} differs after reading back", st.run_id, fname, key));
            }
            for (const auto& [k, v] : st.meta) {
                c.expect(back.meta.count(k) && back.meta.at(k) == v, fmt::format("{}: meta {} differs", st.run_id, k));
            }
        }
    }

    const auto root = dir.path / "e2";
    create_project(root, "example2");
    std::ostringstream out, err;
    int rc1 = run_project({root, std::nullopt, std::nullopt}, out, err);
    auto first = tree(root / "results");
    auto first_report = tree(root / "report");
    int rc2 = run_project({root, std::nullopt, std::nullopt}, out, err);
    c.expect(rc1 == 0 && rc2 == 0, "run failed: " + err.str());
    c.expect(!first.empty() && tree(root / "results") == first, "results trees differ between runs");
    c.expect(!first_report.empty() && tree(root / "report") == first_report, "report trees differ between runs");
    return c.outcome(fmt::format("{} stores x 2 formats; two runs identical over {} files", ex.stores.size(),
                                 first.size() + first_report.size()));
}

// 8 --------------------------------------------------------------------------
Outcome timing()
{
    auto base = base_of(toy::two_node(55, 48), 48);
    std::string text = "run,c_var(n,'gas'),c_i_sto_e(n,'Li-ion')\n";
    for (int r = 0; r < 20; ++r) {
        text += fmt::format("T{},{},{}\n", r, 50 + 2 * r, 20000 - 700 * r);
    }
    auto specs = parse_iteration_table(text);
    std::map<RunMode, double> secs;
    std::map<RunMode, std::vector<double>> objs;
    for (auto mode : {RunMode::rebuild, RunMode::single_instance, RunMode::parallel}) {
        auto t0 = Clock::now();
        auto res = run(specs, base, mode, 2);
        secs[mode] = seconds_since(t0);
        for (const auto& r : res) {
            objs[mode].push_back(r.ok() ? r.solution.objective : NAN);
        }
    }
    Check c;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        double a = objs[RunMode::rebuild][i];
        c.expect(rel(objs[RunMode::single_instance][i], a) <= 1e-6 && rel(objs[RunMode::parallel][i], a) <= 1e-6,
                 fmt::format("{}: objectives differ between modes", specs[i].run_id));
    }
    auto detail = fmt::format("rebuild {:.2f} s, single_instance {:.2f} s, parallel(2) {:.2f} s",
                              secs[RunMode::rebuild], secs[RunMode::single_instance], secs[RunMode::parallel]);
    auto out = c.outcome(detail);
    if (out.verdict == Verdict::fail) {
        return out;
    }
    bool ordered = secs[RunMode::single_instance] <= secs[RunMode::rebuild] &&
                   secs[RunMode::parallel] <= secs[RunMode::single_instance];
    // timings are reported only; hardware decides the parallel speedup
    return {Verdict::pass, detail + (ordered ? "" : " (ordering not met on this machine; informational)")};
}

// 9 --------------------------------------------------------------------------
Outcome mps_crosscheck()
{
    toy::TempDir dir("acc_mps");
    std::string manifest;
    int count = 0;
    auto add = [&](const std::string& name, const LinearProgram& lp) {
        auto path = dir.path / (name + ".mps");
        write_mps(lp, path.string(), name);
        auto s = solve(lp);
        std::string expect = s.optimal() ? fmt::format("{:.17g}", s.objective)
                                         : (s.status == SolveStatus::infeasible ? "infeasible" : "error");
        manifest += path.string() + " " + expect + "\n";
        ++count;
    };
    {
        auto d = toy::merit_order();
        add("merit", build_model(d, toy::config(3), toy::features(d)));
    }
    {
        auto base = base_of(toy::solar_battery_gas(2), 48);
        for (const auto& spec : parse_iteration_table(storage_table)) {
            auto in = apply_overrides(spec, base);
            add("sweep_" + spec.run_id, build_model(in.data, in.config, base.features));
        }
    }
    for (unsigned seed : {1u, 2u}) {
        auto d = toy::two_node(seed, 24);
        d.lines[0].loss_factor = seed == 2 ? 0.03 : 0.0;
        d.nodes[0].min_renewable_share = 0.3;
        add(fmt::format("two_node_{}", seed), build_model(d, toy::config(24), toy::features(d)));
    }
    {
        auto d = toy::merit_order();
        d.technologies[1].cap_max = 1; // peak demand cannot be met
        d.technologies[1].cap_min = 1;
        add("short", build_model(d, toy::config(3), toy::features(d)));
    }
    auto mpath = dir.path / "manifest.txt";
    write_text_file(mpath.string(), manifest);
    std::string cmd = fmt::format("python3 '{}' '{}' > '{}' 2>&1", VOLTAIC_MPS_SCRIPT, mpath.string(),
                                  (dir.path / "log.txt").string());
    int raw = std::system(cmd.c_str());
    int rc = raw == -1 ? 127 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : 1);
    std::string log = fs::exists(dir.path / "log.txt") ? read_text_file((dir.path / "log.txt").string()) : "";
    if (rc == 77 || rc == 127) {
        return {Verdict::skip, "no external LP solver available (python3 with scipy)"};
    }
    if (rc != 0) {
        return {Verdict::fail, "external solver disagrees:\n" + log};
    }
    return {Verdict::pass, fmt::format("{} programs agree with HiGHS via scipy", count)};
}

int report(int number, const std::string& title, const std::function<Outcome()>& fn)
{
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::cout << fmt::format("criterion {}: {} {} - {} [{:.1f} s]", number, tag, title, o.detail,
                             seconds_since(t0))
              << std::endl;
    return o.verdict == Verdict::fail ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1 && std::string(argv[1]) == "--mps-only") {
        auto o = mps_crosscheck();
        std::cout << "criterion 9: " << (o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP")
                  << " mps cross-check - " << o.detail << std::endl;
        return o.verdict == Verdict::pass ? 0 : o.verdict == Verdict::skip ? 77 : 1;
    }
    int failures = 0;
    failures += report(1, "merit-order oracle", merit_order);
    failures += report(2, "mode equivalence", mode_equivalence);
    failures += report(3, "storage cost sweep", storage_sweep);
    failures += report(4, "renewable share sweep", renewable_sweep);
    failures += report(5, "LP certificates", certificates);
    failures += report(6, "symbol algebra", symbol_algebra);
    failures += report(7, "round trip and determinism", round_trip);
    failures += report(8, "timing", timing);
    failures += report(9, "mps cross-check", mps_crosscheck);
    std::cout << (failures ? fmt::format("{} criteria failed", failures) : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
