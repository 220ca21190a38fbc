#ifndef PBSIM_BUILTIN_SCENARIOS_HPP
#define PBSIM_BUILTIN_SCENARIOS_HPP

#include <vector>

#include "scenario.hpp"

namespace pbsim {

// Baseline operating point used throughout: 1 GHz resonator with Q = 5e3,
// g/2pi = 80 MHz, Omega_p/2pi = 100 MHz, eps/2pi = 0.2 MHz, Gamma/2pi = 1 MHz,
// vacuum bath, ten Fock levels, drive on the two-phonon resonance.
inline SystemParams baseline_params() {
    SystemParams p;
    p.omega0 = two_pi * 1e9;
    p.g = two_pi * 80e6;
    p.omega_p_drive = two_pi * 100e6;
    p.epsilon = two_pi * 0.2e6;
    p.delta_d = 0.0;
    p.gamma = two_pi * 1e6;
    p.gamma_phi = 0.0;
    p.kappa = two_pi * 0.2e6;  // Q = 5e3
    p.n_th = 0.0;
    p.fock_dim = 10;
    p.delta = 0.0;  // filled from the resonance condition at run time
    return p;
}

namespace detail {

// Protocol for production sweeps: settle from the effective-model steady state
// (the transient then only has to relax the small frame mismatch) in the
// interaction picture at a slightly relaxed tolerance.
inline SolverSettings sweep_solver() {
    SolverSettings s;
    s.rtol = 1e-7;
    s.atol = 1e-10;
    s.interaction_picture = true;
    s.init = InitialState::effective_ss;
    s.transient_over_kappa = 8.0;
    return s;
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
    return v;
}

inline std::vector<double> scaled(std::vector<double> v, double s) {
    for (double& x : v) x *= s;
    return v;
}

}  // namespace detail

inline std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> list;

    {
        Scenario sc;
        sc.name = "fig2d";
        sc.description = "Rabi transfer |e,0> <-> |g,2> of the undamped lab-frame model at g = Omega_p = 0.1 w0";
        sc.base = baseline_params();
        sc.base.g = two_pi * 100e6;
        sc.base.epsilon = 0.0;
        sc.base.gamma = sc.base.gamma_phi = sc.base.kappa = 0.0;
        sc.kind = ScenarioKind::rabi_series;
        sc.axis_names = {"t_us"};
        sc.axis_grids = {detail::linspace(0.0, 1.0, 1001)};
        sc.observables = {"p_0e", "p_2g"};
        sc.solver.rtol = 1e-9;
        sc.solver.atol = 1e-12;
        sc.solver.interaction_picture = true;
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig3a";
        sc.description = "Phonon populations and <n> vs time from vacuum, lab frame";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::time_series;
        sc.axis_names = {"t_us"};
        sc.axis_grids = {detail::linspace(0.0, 8.0, 321)};
        sc.observables = {"p0", "p1", "p2", "p3", "n_mean"};
        sc.solver.rtol = 1e-7;
        sc.solver.interaction_picture = true;
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig3b";
        sc.description = "Steady-state g2(tau) of the lab-frame model, phase-averaged regression";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::tau_curve;
        sc.axis_names = {"kappa_tau"};
        sc.axis_grids = {detail::linspace(0.0, 5.0, 41)};
        sc.observables = {"g2"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig4";
        sc.description = "Mean phonon number and g2(0) vs mechanical drive detuning";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"delta_d_hz"};
        std::vector<double> mhz;
        for (double v : {-6.0, -5.0, -4.0, -3.0, -2.5, -2.0, -1.75, -1.5, -1.3, -1.2, -1.1, -1.0,
                         -0.9, -0.8, -0.7, -0.6, -0.45, -0.3, -0.15, 0.0, 0.15, 0.3, 0.45, 0.6, 0.7,
                         0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0})
            mhz.push_back(v);
        sc.axis_grids = {detail::scaled(mhz, 1e6)};
        sc.observables = {"n_mean", "g2_0"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig5a";
        sc.description = "g2(0) vs qubit decay for three qubit drive strengths";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"omega_p_hz", "gamma_hz"};
        sc.axis_grids = {{50e6, 100e6, 200e6},
                         detail::scaled({0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, 1e6)};
        sc.observables = {"g2_0", "n_mean"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig5b";
        sc.description = "g2(0) vs thermal occupation for two resonator quality factors";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"q_factor", "n_th"};
        sc.axis_grids = {{5e3, 5e4}, {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}};
        sc.observables = {"g2_0", "n_mean"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig6";
        sc.description = "g2(tau) for pure dephasing rates 0, 0.2 Gamma, 2 Gamma";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::tau_curve;
        sc.axis_names = {"gamma_phi_hz", "kappa_tau"};
        sc.axis_grids = {{0.0, 0.2e6, 2e6}, detail::linspace(0.0, 3.0, 31)};
        sc.observables = {"g2"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig7a";
        sc.description = "Detection probabilities P_e and P_2 against g2(0) under a drive-strength sweep";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"epsilon_hz"};
        sc.axis_grids = {detail::scaled({0.05, 0.1, 0.15, 0.2, 0.3, 0.45, 0.65, 0.9, 1.2, 1.5}, 1e6)};
        sc.observables = {"g2_0", "p_e", "p_2", "n_mean"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig7b";
        sc.description = "Detection sensitivity R = P_e / P_2 vs P_2 for two qubit drive strengths";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"omega_p_hz", "epsilon_hz"};
        sc.axis_grids = {{100e6, 200e6},
                         detail::scaled({0.05, 0.1, 0.15, 0.2, 0.3, 0.45, 0.65, 0.9, 1.2, 1.5}, 1e6)};
        sc.observables = {"p_2", "p_e", "r", "g2_0"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig8a";
        sc.description = "Truncation fidelity F vs resonator drive strength";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"epsilon_hz"};
        sc.axis_grids = {detail::scaled({0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.65, 0.8, 1.0, 1.25, 1.5}, 1e6)};
        sc.observables = {"fidelity", "n_mean", "g2_0"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "fig8b";
        sc.description = "Truncation fidelity F vs qubit drive strength (non-monotone around 100 MHz)";
        sc.base = baseline_params();
        sc.kind = ScenarioKind::parameter_sweep;
        sc.pipeline = Pipeline::lab_frame;
        sc.axis_names = {"omega_p_hz"};
        sc.axis_grids = {detail::scaled({20.0, 40.0, 60.0, 80.0, 100.0, 120.0, 150.0, 180.0, 220.0}, 1e6)};
        sc.observables = {"fidelity", "g2_0", "n_mean"};
        sc.solver = detail::sweep_solver();
        list.push_back(sc);
    }
    return list;
}

inline Scenario find_scenario(const std::string& name) {
    for (auto& sc : builtin_scenarios())
        if (sc.name == name) return sc;
    throw InvalidParameterError("no built-in scenario named '" + name + "'");
}

}  // namespace pbsim

#endif
