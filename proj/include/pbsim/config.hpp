#ifndef PBSIM_CONFIG_HPP
#define PBSIM_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "scenario.hpp"

namespace pbsim {

// Config files are flat INI with [system], [solver], [sweep], [output] (and an
// optional [meta]) sections. Every frequency is entered in Hz (cycles); the
// 2*pi conversion to angular units happens here and nowhere else.
inline Scenario scenario_from_config(const std::filesystem::path& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidParameterError("config: " + std::string(e.what()));
    }

    Scenario sc;
    sc.name = tree.get<std::string>("meta.name", path.stem().string());
    sc.description = tree.get<std::string>("meta.description", "user config " + path.filename().string());
    sc.kind = ScenarioKind::parameter_sweep;

    SystemParams& p = sc.base;
    p.omega0 = two_pi * tree.get<double>("system.omega0_hz");
    p.g = two_pi * tree.get<double>("system.g_hz", 0.0);
    p.omega_p_drive = two_pi * tree.get<double>("system.omega_p_hz", 0.0);
    p.epsilon = two_pi * tree.get<double>("system.epsilon_hz", 0.0);
    p.delta_d = two_pi * tree.get<double>("system.delta_d_hz", 0.0);
    p.gamma = two_pi * tree.get<double>("system.gamma_hz", 0.0);
    p.gamma_phi = two_pi * tree.get<double>("system.gamma_phi_hz", 0.0);
    p.fock_dim = tree.get<Eigen::Index>("system.fock_dim", 10);

    if (auto q = tree.get_optional<double>("system.q_factor")) {
        if (*q <= 0) throw InvalidParameterError("config: q_factor must be positive");
        p.kappa = p.omega0 / *q;
    } else {
        p.kappa = two_pi * tree.get<double>("system.kappa_hz", 0.0);
    }
    if (auto t = tree.get_optional<double>("system.temperature_k")) {
        p.n_th = n_th_from_temperature(p.omega0, *t);
    } else {
        p.n_th = tree.get<double>("system.n_th", 0.0);
    }
    const std::string delta = tree.get<std::string>("system.delta_hz", "resonant");
    if (delta == "resonant" || delta == "auto") {
        sc.resonant_delta_auto = true;
    } else {
        sc.resonant_delta_auto = false;
        p.delta = two_pi * std::stod(delta);
    }

    SolverSettings& s = sc.solver;
    sc.pipeline = pipeline_from_string(tree.get<std::string>("solver.pipeline", "effective-static"));
    s.rtol = tree.get<double>("solver.rtol", s.rtol);
    s.atol = tree.get<double>("solver.atol", s.atol);
    s.interaction_picture = tree.get<bool>("solver.interaction_picture", s.interaction_picture);
    const std::string init = tree.get<std::string>("solver.init", "vacuum");
    if (init == "vacuum") s.init = InitialState::vacuum;
    else if (init == "effective-ss") s.init = InitialState::effective_ss;
    else throw InvalidParameterError("config: solver.init must be 'vacuum' or 'effective-ss'");
    s.transient_over_kappa = tree.get<double>("solver.transient_over_kappa", s.transient_over_kappa);
    s.window_periods = tree.get<double>("solver.window_periods", s.window_periods);
    s.samples_per_window = tree.get<int>("solver.samples_per_window", s.samples_per_window);
    s.drift_tol = tree.get<double>("solver.drift_tol", s.drift_tol);
    s.max_windows = tree.get<int>("solver.max_windows", s.max_windows);
    s.g2_phases = tree.get<int>("solver.g2_phases", s.g2_phases);
    s.threads = tree.get<int>("solver.threads", s.threads);

    auto parse_grid = [](const std::string& text) {
        std::vector<double> grid;
        if (text.find(':') != std::string::npos) {
            // start:stop:count
            std::istringstream is(text);
            std::string a, b, c;
            std::getline(is, a, ':');
            std::getline(is, b, ':');
            std::getline(is, c, ':');
            const double start = std::stod(a), stop = std::stod(b);
            const int count = std::stoi(c);
            if (count < 1) throw InvalidParameterError("config: grid count must be >= 1");
            if (count == 1) {
                grid.push_back(start);
            } else {
                for (int i = 0; i < count; ++i)
                    grid.push_back(start + (stop - start) * i / double(count - 1));
            }
        } else {
            std::istringstream is(text);
            std::string tok;
            while (std::getline(is, tok, ',')) {
                if (!tok.empty()) grid.push_back(std::stod(tok));
            }
        }
        return grid;
    };

    sc.axis_names = {tree.get<std::string>("sweep.parameter")};
    sc.axis_grids = {parse_grid(tree.get<std::string>("sweep.grid"))};
    if (auto p2 = tree.get_optional<std::string>("sweep.parameter2")) {
        sc.axis_names.insert(sc.axis_names.begin(), *p2);
        sc.axis_grids.insert(sc.axis_grids.begin(), parse_grid(tree.get<std::string>("sweep.grid2")));
    }

    {
        std::vector<std::string> obs;
        std::istringstream is(tree.get<std::string>(
            "output.observables", sc.pipeline == Pipeline::analytic || sc.pipeline == Pipeline::oracle
                                      ? "g2_0,c1g_sq,c2g_sq"
                                      : "n_mean,g2_0"));
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (!tok.empty()) obs.push_back(tok);
        }
        sc.observables = obs;
    }
    return sc;
}

}  // namespace pbsim

#endif
