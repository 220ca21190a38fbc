#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <pbsim/builtin_scenarios.hpp>
#include <pbsim/config.hpp>
#include <pbsim/csv.hpp>

using namespace pbsim;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

Scenario tiny_oracle_sweep() {
    Scenario sc;
    sc.name = "tiny";
    sc.base = baseline_params();
    sc.kind = ScenarioKind::parameter_sweep;
    sc.pipeline = Pipeline::oracle;
    sc.axis_names = {"epsilon_hz"};
    sc.axis_grids = {{0.05e6, 0.1e6, 0.2e6}};
    sc.observables = {"g2_0", "c1g_sq"};
    return sc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("built-in scenario set is complete and valid") {
    const auto list = builtin_scenarios();
    const std::vector<std::string> expected = {"fig2d", "fig3a", "fig3b", "fig4", "fig5a",
                                               "fig5b", "fig6",  "fig7a", "fig7b", "fig8a",
                                               "fig8b"};
    REQUIRE(list.size() == expected.size());
    for (const auto& name : expected) REQUIRE_NOTHROW(find_scenario(name));
    for (const auto& sc : list) REQUIRE_NOTHROW(validate_scenario(sc));
    REQUIRE_THROWS_AS(find_scenario("fig99"), InvalidParameterError);
}

TEST_CASE("scenario validation rejects broken definitions") {
    Scenario sc = tiny_oracle_sweep();
    SECTION("empty grid") {
        sc.axis_grids = {{}};
        REQUIRE_THROWS_AS(validate_scenario(sc), InvalidParameterError);
    }
    SECTION("unsorted grid") {
        sc.axis_grids = {{0.2e6, 0.1e6}};
        REQUIRE_THROWS_AS(validate_scenario(sc), InvalidParameterError);
    }
    SECTION("observable not produced by the pipeline") {
        sc.observables = {"fidelity"};
        REQUIRE_THROWS_AS(validate_scenario(sc), InvalidParameterError);
    }
    SECTION("unknown sweep axis") {
        sc.axis_names = {"coffee_hz"};
        REQUIRE_THROWS_AS(validate_scenario(sc), InvalidParameterError);
    }
}

TEST_CASE("oracle sweep runs deterministically and emits stable CSV") {
    const Scenario sc = tiny_oracle_sweep();
    const SweepResult r1 = run(sc);
    const SweepResult r2 = run(sc);
    REQUIRE(r1.rows.size() == 3);
    REQUIRE_FALSE(r1.any_error());

    const fs::path dir = fs::temp_directory_path() / "pbsim_test_csv";
    fs::create_directories(dir);
    emit_csv(r1, dir / "a.csv");
    emit_csv(r2, dir / "b.csv");
    REQUIRE(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

    const std::string text = slurp(dir / "a.csv");
    REQUIRE(text.rfind("# cfg=", 0) == 0);
    REQUIRE(text.find("epsilon_hz,g2_0,c1g_sq") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("analytic and oracle pipelines agree with the module functions") {
    Scenario sc = tiny_oracle_sweep();
    sc.pipeline = Pipeline::analytic;
    sc.observables = {"g2_0", "lambda_hz"};
    const SweepResult r = run(sc);
    const DerivedParams d = derive(sc.base);
    REQUIRE(r.rows[2].obs[1] == Approx(d.lambda_eff / two_pi));
    REQUIRE(r.rows[2].obs[0] ==
            Approx(g2_analytic(two_pi * 0.2e6, sc.base.kappa, sc.base.gamma, d.lambda_eff)));
}

TEST_CASE("effective-static sweep over detuning reproduces the blockade dip") {
    Scenario sc;
    sc.name = "static_dd";
    sc.base = baseline_params();
    sc.kind = ScenarioKind::parameter_sweep;
    sc.pipeline = Pipeline::effective_static;
    sc.axis_names = {"delta_d_hz"};
    sc.axis_grids = {{-1.0e6, 0.0, 1.0e6}};
    sc.observables = {"n_mean", "g2_0"};
    const SweepResult r = run(sc);
    REQUIRE_FALSE(r.any_error());
    // dip at resonance, bunching near the split-level resonance
    REQUIRE(r.rows[1].obs[1] < 0.05);
    REQUIRE(r.rows[0].obs[1] > 1.0);
    REQUIRE(r.rows[2].obs[1] > 1.0);
    REQUIRE(r.rows[1].obs[0] == Approx(0.44).margin(0.02));
}

TEST_CASE("row errors are attached and do not stop the sweep") {
    Scenario sc = tiny_oracle_sweep();
    sc.pipeline = Pipeline::effective_static;
    sc.observables = {"n_mean", "g2_0"};
    sc.axis_names = {"n_th"};
    sc.axis_grids = {{-2.0, 0.0}};  // first point invalid
    const SweepResult r = run(sc);
    REQUIRE(r.rows.size() == 2);
    REQUIRE_FALSE(r.rows[0].error.empty());
    REQUIRE(std::isnan(r.rows[0].obs[0]));
    REQUIRE(r.rows[1].error.empty());

    const fs::path dir = fs::temp_directory_path() / "pbsim_test_csv2";
    fs::create_directories(dir);
    emit_csv(r, dir / "partial.csv");
    const std::string text = slurp(dir / "partial.csv");
    REQUIRE(text.find("#error") != std::string::npos);
    REQUIRE(text.find("nan") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("threaded sweep matches the single-threaded result") {
    Scenario sc = tiny_oracle_sweep();
    sc.pipeline = Pipeline::effective_static;
    sc.observables = {"n_mean", "g2_0", "fidelity"};
    sc.axis_grids = {{0.05e6, 0.1e6, 0.2e6, 0.4e6}};
    sc.solver.threads = 1;
    const SweepResult serial = run(sc);
    sc.solver.threads = 4;
    const SweepResult parallel = run(sc);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i)
        for (std::size_t j = 0; j < serial.rows[i].obs.size(); ++j)
            REQUIRE(serial.rows[i].obs[j] == parallel.rows[i].obs[j]);
}

TEST_CASE("two-axis sweeps order rows by the outer grid first") {
    Scenario sc = tiny_oracle_sweep();
    sc.pipeline = Pipeline::oracle;
    sc.axis_names = {"gamma_hz", "epsilon_hz"};
    sc.axis_grids = {{1e6, 3e6}, {0.1e6, 0.2e6}};
    sc.observables = {"g2_0"};
    const SweepResult r = run(sc);
    REQUIRE(r.rows.size() == 4);
    REQUIRE(r.rows[0].params == std::vector<double>{1e6, 0.1e6});
    REQUIRE(r.rows[1].params == std::vector<double>{1e6, 0.2e6});
    REQUIRE(r.rows[3].params == std::vector<double>{3e6, 0.2e6});
}

TEST_CASE("config files parse into runnable scenarios") {
    const fs::path dir = fs::temp_directory_path() / "pbsim_test_cfg";
    fs::create_directories(dir);
    const fs::path cfg = dir / "sweep.ini";
    {
        std::ofstream out(cfg);
        out << "[system]\n"
               "omega0_hz = 1e9\n"
               "g_hz = 8e7\n"
               "omega_p_hz = 1e8\n"
               "epsilon_hz = 2e5\n"
               "gamma_hz = 1e6\n"
               "q_factor = 5e3\n"
               "delta_hz = resonant\n"
               "fock_dim = 10\n"
               "[solver]\n"
               "pipeline = effective-static\n"
               "[sweep]\n"
               "parameter = delta_d_hz\n"
               "grid = -1e6:1e6:3\n"
               "[output]\n"
               "observables = n_mean,g2_0\n";
    }
    const Scenario sc = scenario_from_config(cfg);
    REQUIRE(sc.base.kappa == Approx(two_pi * 0.2e6));
    REQUIRE(sc.resonant_delta_auto);
    REQUIRE(sc.axis_grids.front() == std::vector<double>{-1e6, 0.0, 1e6});
    REQUIRE_NOTHROW(validate_scenario(sc));
    const SweepResult r = run(sc);
    REQUIRE(r.rows.size() == 3);
    REQUIRE(r.rows[1].obs[1] < 0.05);

    SECTION("temperature sets the thermal occupation") {
        const fs::path cfg2 = dir / "temp.ini";
        std::ofstream out(cfg2);
        out << "[system]\nomega0_hz = 1e9\ng_hz = 8e7\nomega_p_hz = 1e8\nepsilon_hz = 2e5\n"
               "gamma_hz = 1e6\nq_factor = 5e3\ntemperature_k = 0.06923\n"
               "[sweep]\nparameter = delta_d_hz\ngrid = 0,1e6\n";
        out.close();
        const Scenario sc2 = scenario_from_config(cfg2);
        REQUIRE(sc2.base.n_th == Approx(1.0).epsilon(0.02));  // hbar w0 / kB T ~ ln 2
    }
    SECTION("broken config throws") {
        const fs::path cfg3 = dir / "broken.ini";
        std::ofstream out(cfg3);
        out << "[system]\ng_hz = 8e7\n[sweep]\nparameter = delta_d_hz\ngrid = 0,1\n";
        out.close();
        REQUIRE_THROWS(scenario_from_config(cfg3));
    }
    fs::remove_all(dir);
}

TEST_CASE("emit_csv guards") {
    SweepResult empty;
    empty.scenario = "x";
    REQUIRE_THROWS_AS(emit_csv(empty, "/tmp/should_not_exist.csv"), InvalidParameterError);
    REQUIRE_FALSE(fs::exists("/tmp/should_not_exist.csv"));
}

TEST_CASE("format_double emits nine significant digits") {
    REQUIRE(format_double(0.4438155123456) == "0.443815512");
    REQUIRE(format_double(1.0) == "1");
}
