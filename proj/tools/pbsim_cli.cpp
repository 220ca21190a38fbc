// Command-line front end: run scenarios or config files, validate configs,
// and evaluate the four-state theory directly.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <pbsim/pbsim.hpp>

namespace fs = std::filesystem;

namespace {

fs::path default_out_dir() {
    if (const char* env = std::getenv("PBSIM_OUT_DIR")) return fs::path(env);
    return fs::current_path();
}

int cmd_list() {
    for (const auto& sc : pbsim::builtin_scenarios()) {
        std::cout << sc.name << "  [" << pbsim::to_string(sc.pipeline) << "]  " << sc.description
                  << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& config) {
    try {
        const pbsim::Scenario sc = pbsim::scenario_from_config(config);
        pbsim::validate_scenario(sc);
        std::cout << "ok: scenario '" << sc.name << "', " << sc.axis_grids.front().size()
                  << " point(s) on axis " << sc.axis_names.front() << "\n";
        const auto report = pbsim::check_validity(sc.base);
        for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    }
}

int cmd_oracle(const std::vector<std::string>& kv) {
    double eps_hz = 0.2e6, kappa_hz = 0.2e6, gamma_hz = 1e6;
    double lambda_hz = -1.0, omega0_hz = 1e9, g_hz = 80e6, omega_p_hz = 100e6;
    for (const auto& item : kv) {
        const auto pos = item.find('=');
        if (pos == std::string::npos) {
            std::cerr << "expected key=value, got '" << item << "'\n";
            return 1;
        }
        const std::string key = item.substr(0, pos);
        const double val = std::stod(item.substr(pos + 1));
        if (key == "epsilon_hz") eps_hz = val;
        else if (key == "kappa_hz") kappa_hz = val;
        else if (key == "gamma_hz") gamma_hz = val;
        else if (key == "lambda_hz") lambda_hz = val;
        else if (key == "omega0_hz") omega0_hz = val;
        else if (key == "g_hz") g_hz = val;
        else if (key == "omega_p_hz") omega_p_hz = val;
        else {
            std::cerr << "unknown parameter '" << key << "'\n";
            return 1;
        }
    }
    const double tp = pbsim::two_pi;
    double lambda = lambda_hz > 0 ? tp * lambda_hz
                                  : 2.0 * (tp * omega_p_hz) * (tp * g_hz) * (tp * g_hz) /
                                        ((tp * omega0_hz) * (tp * omega0_hz));
    try {
        const double eps = tp * eps_hz, kap = tp * kappa_hz, gam = tp * gamma_hz;
        const auto closed = pbsim::steady_amplitudes(eps, kap, gam, lambda);
        const auto oracle = pbsim::four_state_oracle(eps, kap, gam, lambda);
        const auto cond = pbsim::blockade_condition(eps, kap, gam, lambda);
        std::cout << "lambda/2pi = " << lambda / tp << " Hz\n";
        std::cout << "closed form:  |C1g|^2 = " << closed.p1g() << "  |C2g|^2 = " << closed.p2g()
                  << "  |C0e|^2 = " << closed.p0e()
                  << "  g2(0) = " << pbsim::g2_analytic(eps, kap, gam, lambda) << "\n";
        std::cout << "oracle:       |C1g|^2 = " << oracle.amplitudes.p1g()
                  << "  |C2g|^2 = " << oracle.amplitudes.p2g()
                  << "  |C0e|^2 = " << oracle.amplitudes.p0e() << "  g2(0) = " << oracle.g2 << "\n";
        std::cout << "blockade: 4 lambda^2/Gamma = " << cond.coupling_scale / tp
                  << " Hz vs max(2 sqrt2 eps, kappa) = " << cond.competing_scale / tp
                  << " Hz, ratio = " << cond.ratio << (cond.strong ? " (strong)" : " (weak)") << "\n";
        for (const auto& note : closed.notes) std::cout << "note: " << note << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "oracle failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_run(const std::string& target, const fs::path& out_dir, const std::string& pipeline_override,
            double tol_override, int fock_override, int threads) {
    pbsim::Scenario sc;
    try {
        if (fs::exists(target) && fs::path(target).extension() == ".ini") {
            sc = pbsim::scenario_from_config(target);
        } else {
            sc = pbsim::find_scenario(target);
        }
        if (!pipeline_override.empty()) {
            if (sc.kind != pbsim::ScenarioKind::parameter_sweep)
                throw pbsim::InvalidParameterError("--pipeline applies only to parameter sweeps");
            sc.pipeline = pbsim::pipeline_from_string(pipeline_override);
        }
        if (tol_override > 0) sc.solver.rtol = tol_override;
        if (fock_override > 0) sc.base.fock_dim = fock_override;
        if (threads > 0) sc.solver.threads = threads;
        pbsim::validate_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return 1;
    }

    try {
        const pbsim::SweepResult result = pbsim::run(sc);
        fs::create_directories(out_dir);
        const fs::path csv_path = out_dir / (sc.name + ".csv");
        pbsim::emit_csv(result, csv_path);
        std::cout << "scenario " << sc.name << ": " << result.rows.size() << " row(s) in "
                  << result.wall_seconds << " s -> " << csv_path.string() << "\n";
        std::cout << "solver: " << result.solver_digest << "\n";
        if (result.any_error()) {
            for (const auto& row : result.rows)
                if (!row.error.empty()) std::cerr << "row failed: " << row.error << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phonon-blockade simulator for a driven resonator coupled to a charge qubit"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list built-in scenarios");

    std::string run_target, pipeline_override;
    std::string out_dir = default_out_dir().string();
    double tol_override = -1.0;
    int fock_override = -1, threads = -1;
    auto* runcmd = app.add_subcommand("run", "run a built-in scenario or a config file");
    runcmd->add_option("target", run_target, "scenario name or path to .ini config")->required();
    runcmd->add_option("--out", out_dir, "output directory (default $PBSIM_OUT_DIR or cwd)");
    runcmd->add_option("--pipeline", pipeline_override,
                       "override pipeline: lab-frame|effective-static|analytic|oracle");
    runcmd->add_option("--tol", tol_override, "override relative tolerance");
    runcmd->add_option("--fock-dim", fock_override, "override Fock truncation");
    runcmd->add_option("--threads", threads, "worker threads for sweep points");

    std::string validate_target;
    auto* val = app.add_subcommand("validate", "validate a config file");
    val->add_option("config", validate_target, "path to .ini config")->required();

    std::vector<std::string> oracle_kv;
    auto* orc = app.add_subcommand("oracle", "evaluate the four-state theory (key=value...)");
    orc->add_option("params", oracle_kv,
                    "epsilon_hz, kappa_hz, gamma_hz and either lambda_hz or omega0_hz,g_hz,omega_p_hz");

    CLI11_PARSE(app, argc, argv);

    if (*list) return cmd_list();
    if (*runcmd) return cmd_run(run_target, out_dir, pipeline_override, tol_override, fock_override, threads);
    if (*val) return cmd_validate(validate_target);
    if (*orc) return cmd_oracle(oracle_kv);
    return 1;
}
