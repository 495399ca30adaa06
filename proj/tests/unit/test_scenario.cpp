#include <doctest.h>

#include "toy.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/scenario/iteration_table.hpp"
#include "voltaic/scenario/overrides.hpp"
#include "voltaic/scenario/runner.hpp"
#include "voltaic/scenario/symbol_ref.hpp"

#include <chrono>
#include <thread>

using namespace voltaic;

namespace {

const char* storage_costs = "run,c_i_sto_e(n,'Li-ion'),c_i_sto_p(n,'Li-ion')\n"
                     "run,[EUR/MWh],[EUR/MW]\n"
                     "S0,20029,15021\n"
                     "S1,10014,7511\n"
                     "S2,5007,3755\n";

ScenarioBase base_of(SystemData d, int hours)
{
    ScenarioBase b;
    b.features = toy::features(d);
    b.data = std::move(d);
    b.config = toy::config(hours);
    return b;
}

SystemData many_nodes(int count, int hours)
{
    SystemData d;
    for (int i = 0; i < count; ++i) {
        std::string n = "N" + std::to_string(i);
        toy::node(d, n, std::vector<double>(hours, 10.0 + i));
        toy::disp(d, "gas", n, 70, 0, 100, 40000);
        toy::vre(d, "solar", n, std::vector<double>(hours, 0.3), 38000, 100);
        toy::storage(d, "Li-ion", n, 20029, 15021, 0.95, 0.95, 100, 10);
    }
    return d;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::size_t count_kind(const std::vector<LpUpdate>& v, LpUpdate::Kind k)
{
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](const LpUpdate& u) { return u.kind == k; }));
}

// A 10-run sweep over the two-node system touching every kind of override.
std::vector<ScenarioSpec> mixed_sweep()
{
    return parse_iteration_table("run,c_i_sto_e(n,'Li-ion'),c_var('FR','gas'),min_renewable_share('DE'),"
                                 "N.up('wind',n),country_set,ntc_expansion,loss_factor('DE-FR'),d('FR')\n"
                                 "R0,,,,,,,,\n"
                                 "R1,10014,,,,,,,\n"
                                 "R2,,95,,,,,,\n"
                                 "R3,,,0.6,,,,,\n"
                                 "R4,,,,50,,,,\n"
                                 "R5,,,,,DE,,,\n"
                                 "R6,,,,,,off,,\n"
                                 "R7,,,,,,,0.05,\n"
                                 "R8,5007,80,0.4,,,,,alt_FR\n"
                                 "R9,,,,,FR,,,alt_FR\n");
}

ScenarioBase mixed_base(int hours)
{
    auto d = toy::two_node(17, hours);
    std::vector<double> alt = d.series_named("d_FR").values;
    for (auto& v : alt) {
        v *= 1.1;
    }
    toy::series(d, "alt_FR", alt);
    return base_of(d, hours);
}

} // namespace

TEST_CASE("symbol references parse and render")
{
    auto r = parse_symbol_ref("c_i_sto_e(n,'Li-ion')");
    CHECK(r.name == "c_i_sto_e");
    REQUIRE(r.domain.size() == 2);
    CHECK(r.domain[0] == DomainEntry{"n", false});
    CHECK(r.domain[1] == DomainEntry{"Li-ion", true});
    CHECK(r.kind == TargetKind::parameter);

    for (const char* canonical : {"c_i_sto_e(n,'Li-ion')", "N.fx('gas','DE')", "N.lo(tech,n)", "G.up('gas',n,h)",
                                  "slack_penalty", "d('De')", "country_set"}) {
        CHECK(render(parse_symbol_ref(canonical)) == canonical);
    }
    CHECK(render(parse_symbol_ref(" N( 'gas' , \"DE\" ).fx ")) == "N.fx('gas','DE')");
    CHECK(parse_symbol_ref("N.fx('gas','DE')").kind == TargetKind::variable_fix);
    CHECK(parse_symbol_ref("N.lo('gas','DE')").kind == TargetKind::variable_lo);
    CHECK(parse_symbol_ref("N.up('gas','DE')").kind == TargetKind::variable_up);
    CHECK(parse_symbol_ref("country_set").kind == TargetKind::country_set);
    CHECK(parse_symbol_ref("d('de')").domain[0].text == "de"); // case kept

    for (const char* bad : {"c(n", "c(n))", "c(n,'x)", "c(,n)", "c(n) x", "c(n-1)", "(n)", "N.zz('a')", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_symbol_ref(bad), ValidationError);
    }
}

TEST_CASE("storage cost table")
{
    auto specs = parse_iteration_table(storage_costs);
    REQUIRE(specs.size() == 3);
    CHECK(specs[0].run_id == "S0");
    CHECK(specs[2].run_id == "S2");
    REQUIRE(specs[2].overrides.size() == 2);
    CHECK(render(specs[2].overrides[0].ref) == "c_i_sto_e(n,'Li-ion')");
    CHECK(specs[2].overrides[0].number == 5007);
    CHECK(specs[2].overrides[1].number == 3755);
    CHECK(specs[1].overrides[0].number == 10014);
    CHECK(specs[1].overrides[1].number == 7511);
    CHECK(specs[0].overrides[0].number == 20029);
    CHECK(specs[0].overrides[1].number == 15021);
    CHECK_FALSE(specs[0].country_set);
}

TEST_CASE("iteration table variants and errors")
{
    auto repeats = parse_iteration_table("run\nA\nB\n");
    REQUIRE(repeats.size() == 2);
    CHECK(repeats[1].overrides.empty());

    auto mixed = parse_iteration_table("run,country_set,renewable_share,d('DE'),c_var(n,'gas')\n"
                                       "A,DE;FR,off,alt,\n"
                                       "B,,,,12.5\n");
    REQUIRE(mixed.size() == 2);
    CHECK(mixed[0].country_set == std::vector<std::string>{"DE", "FR"});
    CHECK(mixed[0].constraint_choices == std::vector<std::pair<std::string, std::string>>{{"renewable_share", "off"}});
    REQUIRE(mixed[0].overrides.size() == 1);
    CHECK(mixed[0].overrides[0].ref.kind == TargetKind::timeseries);
    CHECK(mixed[0].overrides[0].text == "alt");
    CHECK_FALSE(mixed[1].country_set);
    CHECK(mixed[1].overrides.size() == 1);

    CHECK_THROWS_AS(parse_iteration_table("run,c_var(n\nA,1\n"), ValidationError);
    CHECK_THROWS_AS(parse_iteration_table("run\nA\nA\n"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_iteration_table("run,c_var(n,'gas')\nA,cheap\n"), doctest::Contains("cheap"),
                         ValidationError);
    CHECK_THROWS_AS(parse_iteration_table("run,renewable_share\nA,maybe\n"), ValidationError);
    CHECK_THROWS_AS(parse_iteration_table("run\nA,1\n"), ValidationError);
    CHECK_THROWS_AS(parse_iteration_table("run\n,\n"), ValidationError);
}

TEST_CASE("fan-out over twelve nodes")
{
    auto base = base_of(many_nodes(12, 4), 4);
    BuildOptions opt;
    opt.keep_inactive_rows = true;
    auto lp = build_model(base.data, base.config, base.features, opt);
    auto specs = parse_iteration_table(storage_costs);
    auto ex = expand_overrides(specs[1], lp, base);
    std::size_t energy = 0;
    for (const auto& u : ex.deltas) {
        if (u.kind == LpUpdate::Kind::objective && lp.columns()[u.col].name == "N_STO_E") {
            ++energy;
            CHECK(u.value == doctest::Approx(10014 * 4 / 8760.0));
        }
    }
    CHECK(energy == 12);
    CHECK(ex.excluded_columns.empty());

    // product of set sizes: c_var(n,tech) over 12 nodes x 2 technologies
    auto all = parse_iteration_table("run,c_var(n,tech)\nA,1\n");
    auto inputs = apply_overrides(all[0], base);
    CHECK(inputs.touched.size() == 24);
    auto ex2 = expand_overrides(all[0], lp, base);
    CHECK(count_kind(ex2.deltas, LpUpdate::Kind::objective) == 12 * 2 * 4); // every G column

    auto fixed = parse_iteration_table("run,N.fx('gas','N3')\nA,0\n");
    auto ex3 = expand_overrides(fixed[0], lp, base);
    REQUIRE(ex3.deltas.size() == 2);
    CHECK(count_kind(ex3.deltas, LpUpdate::Kind::column_lower) == 1);
    CHECK(count_kind(ex3.deltas, LpUpdate::Kind::column_upper) == 1);
    CHECK(ex3.deltas[0].col == lp.find_column("N", {"gas", "N3"}).value());

    CHECK_THROWS_AS(expand_overrides(parse_iteration_table("run,c_var('XX','gas')\nA,1\n")[0], lp, base),
                    ValidationError);
    CHECK_THROWS_AS(expand_overrides(parse_iteration_table("run,c_var(tech,'gas')\nA,1\n")[0], lp, base),
                    ValidationError);
    CHECK_THROWS_AS(expand_overrides(parse_iteration_table("run,zeta(n)\nA,1\n")[0], lp, base), ValidationError);
    CHECK_THROWS_AS(expand_overrides(parse_iteration_table("run,Z.fx(n)\nA,1\n")[0], lp, base), ValidationError);
}

TEST_CASE("a literal node restricts the override")
{
    auto base = base_of(toy::two_node(2, 24), 24);
    auto specs = parse_iteration_table("run,c_i_sto_e('DE','Li-ion')\nA,5007\n");
    auto inputs = apply_overrides(specs[0], base);
    CHECK(inputs.data.find_storage("Li-ion", "DE")->c_i_sto_e == 5007);
    CHECK(inputs.data.find_storage("Li-ion", "FR")->c_i_sto_e == 20029);

    RunOptions opt;
    opt.mode = RunMode::rebuild;
    auto res = run_scenarios(specs, base, opt);
    REQUIRE(res[0].ok());
    const auto& lp = *res[0].program;
    CHECK(lp.columns()[lp.find_column("N_STO_E", {"Li-ion", "FR"}).value()].cost ==
          doctest::Approx(20029 * 24 / 8760.0));
    CHECK(lp.columns()[lp.find_column("N_STO_E", {"Li-ion", "DE"}).value()].cost ==
          doctest::Approx(5007 * 24 / 8760.0));
}

TEST_CASE("a demand series swap rewrites every balance rhs")
{
    auto base = mixed_base(48);
    BuildOptions opt;
    opt.keep_inactive_rows = true;
    opt.directional_lines = {"DE-FR"};
    auto lp = build_model(base.data, base.config, base.features, opt);
    auto spec = parse_iteration_table("run,d('FR')\nA,alt_FR\n")[0];
    auto ex = expand_overrides(spec, lp, base);
    const auto& alt = base.data.series_named("alt_FR").values;
    std::size_t seen = 0;
    for (const auto& u : ex.deltas) {
        if (u.kind == LpUpdate::Kind::row_rhs && lp.rows()[u.row].name == "BAL") {
            const auto& row = lp.rows()[u.row];
            CHECK(row.domain[0] == "FR");
            CHECK(u.value == alt[std::stoul(row.domain[1].substr(1)) - 1]);
            ++seen;
        }
    }
    CHECK(seen == 48);
    CHECK_THROWS_AS(expand_overrides(parse_iteration_table("run,d('FR')\nA,nope\n")[0], lp, base), ValidationError);
}

TEST_CASE("three modes agree on a mixed sweep")
{
    auto base = mixed_base(48);
    auto specs = mixed_sweep();
    std::vector<std::vector<RunResult>> all;
    for (auto mode : {RunMode::rebuild, RunMode::single_instance, RunMode::parallel}) {
        RunOptions opt;
        opt.mode = mode;
        opt.threads = 3;
        all.push_back(run_scenarios(specs, base, opt));
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        CAPTURE(specs[i].run_id);
        REQUIRE(all[0][i].ok());
        for (std::size_t m = 1; m < all.size(); ++m) {
            REQUIRE(all[m][i].ok());
            CHECK(all[m][i].run_id == specs[i].run_id);
            CHECK(rel(all[m][i].solution.objective, all[0][i].solution.objective) <= 1e-6);
        }
    }
    // the single-node runs equal a plain single-node build
    BuildOptions de;
    de.country_set = {"DE"};
    auto alone = solve(build_model(base.data, base.config, base.features, de));
    CHECK(rel(all[1][5].solution.objective, alone.objective) <= 1e-6);
    CHECK(all[1][5].inputs.active_nodes == std::vector<std::string>{"DE"});
}

TEST_CASE("results keep input order whatever finishes first")
{
    auto base = base_of(toy::two_node(3, 24), 24);
    auto specs = parse_iteration_table("run,c_var(n,'gas')\nA,60\nB,65\nC,70\nD,75\nE,80\nF,85\n");
    RunOptions ref;
    ref.mode = RunMode::rebuild;
    auto expect = run_scenarios(specs, base, ref);

    RunOptions opt;
    opt.mode = RunMode::parallel;
    opt.threads = 3;
    opt.before_run = [](std::size_t i) { std::this_thread::sleep_for(std::chrono::milliseconds(30 * (6 - i))); };
    auto got = run_scenarios(specs, base, opt);
    REQUIRE(got.size() == specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        CHECK(got[i].index == i);
        CHECK(got[i].run_id == specs[i].run_id);
        CHECK(rel(got[i].solution.objective, expect[i].solution.objective) <= 1e-6);
    }
    for (std::size_t i = 1; i < specs.size(); ++i) {
        CHECK(got[i].solution.objective >= got[i - 1].solution.objective - 1e-7);
    }
}

TEST_CASE("overrides do not leak into later runs")
{
    auto base = base_of(toy::two_node(8, 24), 24);
    // the sentinel makes gas absurdly expensive in run B only
    auto specs = parse_iteration_table("run,c_var(n,'gas'),N.up('wind',n)\nA,,\nB,5000,0\nC,,\n");
    for (auto mode : {RunMode::single_instance, RunMode::parallel}) {
        RunOptions opt;
        opt.mode = mode;
        opt.threads = 1;
        auto res = run_scenarios(specs, base, opt);
        REQUIRE(res[2].ok());
        CHECK(res[1].solution.objective > res[0].solution.objective);
        CHECK(res[2].solution.objective == doctest::Approx(res[0].solution.objective).epsilon(1e-9));
    }
}

TEST_CASE("a single spec in parallel mode equals rebuild")
{
    auto base = base_of(toy::solar_battery_gas(2), 48);
    auto specs = parse_iteration_table("run\nonly\n");
    RunOptions par;
    par.mode = RunMode::parallel;
    par.threads = 4;
    RunOptions reb;
    reb.mode = RunMode::rebuild;
    auto a = run_scenarios(specs, base, par);
    auto b = run_scenarios(specs, base, reb);
    REQUIRE(a[0].ok());
    CHECK(rel(a[0].solution.objective, b[0].solution.objective) <= 1e-6);
}

TEST_CASE("failing runs are recorded and the rest proceed")
{
    auto base = base_of(toy::two_node(6, 24), 24);
    auto specs = parse_iteration_table("run,country_set,N.fx('gas','DE'),N.up(tech,'DE'),c_var('XX','gas')\n"
                                       "ok1,,,,\n"
                                       "badnode,DE;XX,,,\n"
                                       "infeasible,DE,0,0,\n"
                                       "badliteral,,,,3\n"
                                       "ok2,,,,\n");
    for (auto mode : {RunMode::rebuild, RunMode::single_instance, RunMode::parallel}) {
        RunOptions opt;
        opt.mode = mode;
        opt.threads = 2;
        auto res = run_scenarios(specs, base, opt);
        REQUIRE(res.size() == 5);
        CHECK(res[0].ok());
        CHECK_FALSE(res[1].ok());
        CHECK(res[1].error.find("XX") != std::string::npos);
        CHECK(res[2].solution.status == SolveStatus::infeasible);
        CHECK(res[2].status_text() == "infeasible");
        CHECK_FALSE(res[3].ok());
        CHECK(res[4].ok());
        CHECK(res[4].solution.objective == doctest::Approx(res[0].solution.objective).epsilon(1e-9));
    }
}

TEST_CASE("storage cost sweep in all modes")
{
    auto base = base_of(toy::solar_battery_gas(2), 48);
    auto specs = parse_iteration_table(storage_costs);
    std::vector<double> reference;
    for (auto mode : {RunMode::rebuild, RunMode::single_instance, RunMode::parallel}) {
        RunOptions opt;
        opt.mode = mode;
        opt.threads = 2;
        auto res = run_scenarios(specs, base, opt);
        for (std::size_t i = 0; i < res.size(); ++i) {
            REQUIRE(res[i].ok());
            if (reference.size() < res.size()) {
                reference.push_back(res[i].solution.objective);
            } else {
                CHECK(rel(res[i].solution.objective, reference[i]) <= 1e-6);
            }
        }
    }
    CHECK(reference[1] <= reference[0] + 1e-7);
    CHECK(reference[2] <= reference[1] + 1e-7);
}

TEST_CASE("renewable share sweep is non-decreasing in cost")
{
    auto base = base_of(toy::two_node(12, 48), 48);
    auto specs = parse_iteration_table("run,min_renewable_share('DE'),min_renewable_share('FR')\n"
                                       "RES50,0.5,0.4\nRES60,0.6,0.5\nRES70,0.7,0.6\nRES80,0.8,0.7\n");
    RunOptions opt;
    opt.mode = RunMode::single_instance;
    auto res = run_scenarios(specs, base, opt);
    for (std::size_t i = 0; i < res.size(); ++i) {
        REQUIRE(res[i].ok());
        if (i > 0) {
            CHECK(res[i].solution.objective >= res[i - 1].solution.objective - 1e-7);
        }
    }
}

TEST_CASE("mode names and config mapping")
{
    CHECK(parse_run_mode("rebuild") == RunMode::rebuild);
    CHECK(parse_run_mode("single") == RunMode::single_instance);
    CHECK(parse_run_mode("single_instance") == RunMode::single_instance);
    CHECK(parse_run_mode("parallel") == RunMode::parallel);
    CHECK_FALSE(parse_run_mode("fast"));
    ModelConfig c;
    c.guss = false;
    c.guss_parallel = true;
    CHECK(mode_from_config(c) == RunMode::rebuild);
    c.guss = true;
    c.guss_parallel = false;
    CHECK(mode_from_config(c) == RunMode::single_instance);
    c.guss_parallel = true;
    CHECK(mode_from_config(c) == RunMode::parallel);
}
