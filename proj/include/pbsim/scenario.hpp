#ifndef PBSIM_SCENARIO_HPP
#define PBSIM_SCENARIO_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "analytic.hpp"
#include "csv.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "steadystate.hpp"
#include "types.hpp"

namespace pbsim {

enum class Pipeline { lab_frame, effective_static, analytic, oracle };

inline std::string to_string(Pipeline p) {
    switch (p) {
        case Pipeline::lab_frame: return "lab-frame";
        case Pipeline::effective_static: return "effective-static";
        case Pipeline::analytic: return "analytic";
        case Pipeline::oracle: return "oracle";
    }
    return "?";
}

inline Pipeline pipeline_from_string(const std::string& s) {
    if (s == "lab-frame") return Pipeline::lab_frame;
    if (s == "effective-static") return Pipeline::effective_static;
    if (s == "analytic") return Pipeline::analytic;
    if (s == "oracle") return Pipeline::oracle;
    throw InvalidParameterError("unknown pipeline '" + s + "'");
}

enum class InitialState { vacuum, effective_ss };

// Numerical protocol for a scenario; the defaults are the project-wide ones,
// individual scenarios override where the physics allows a cheaper settle.
struct SolverSettings {
    double rtol = 1e-8;
    double atol = 1e-10;
    bool interaction_picture = false;
    InitialState init = InitialState::vacuum;
    double transient_over_kappa = 20.0;  // transient = this / (kappa (2 n_th + 1))
    double window_periods = 10.0;        // averaging window in drive periods
    int samples_per_window = 200;
    double drift_tol = 0.01;
    int max_windows = 8;
    int g2_phases = 8;                   // t0 phases averaged for driven g2(tau)
    int threads = 1;
};

enum class ScenarioKind { parameter_sweep, time_series, tau_curve, rabi_series };

// A named, reproducible experiment: base parameters, one or two swept
// parameter axes, a pipeline, and the observable columns to emit.
struct Scenario {
    std::string name;
    std::string description;
    SystemParams base;                 // rad/s internally
    bool resonant_delta_auto = true;   // delta from the two-phonon resonance condition
    ScenarioKind kind = ScenarioKind::parameter_sweep;
    Pipeline pipeline = Pipeline::lab_frame;
    std::vector<std::string> axis_names;         // boundary-unit column names
    std::vector<std::vector<double>> axis_grids; // outer product, row-major over axes
    std::vector<std::string> observables;
    SolverSettings solver;
};

struct SweepRow {
    std::vector<double> params;
    std::vector<double> obs;
    std::string error;  // empty on success
};

struct SweepResult {
    std::string scenario;
    std::vector<std::string> param_names;
    std::vector<std::string> obs_names;
    std::vector<SweepRow> rows;
    std::string config_hash;
    std::string solver_digest;
    double wall_seconds = 0.0;

    bool any_error() const {
        for (const auto& r : rows)
            if (!r.error.empty()) return true;
        return false;
    }
};

namespace detail {

// Applies one boundary-unit axis value to the parameter set.
inline void apply_axis(SystemParams& p, const std::string& axis, double value) {
    if (axis == "delta_d_hz") p.delta_d = two_pi * value;
    else if (axis == "gamma_hz") p.gamma = two_pi * value;
    else if (axis == "gamma_phi_hz") p.gamma_phi = two_pi * value;
    else if (axis == "epsilon_hz") p.epsilon = two_pi * value;
    else if (axis == "omega_p_hz") p.omega_p_drive = two_pi * value;
    else if (axis == "kappa_hz") p.kappa = two_pi * value;
    else if (axis == "g_hz") p.g = two_pi * value;
    else if (axis == "n_th") p.n_th = value;
    else if (axis == "q_factor") p.kappa = p.omega0 / value;
    else throw InvalidParameterError("unknown sweep parameter '" + axis + "'");
}

inline bool axis_is_sweepable(const std::string& axis) {
    static const std::vector<std::string> axes = {"delta_d_hz", "gamma_hz", "gamma_phi_hz", "epsilon_hz",
                                                  "omega_p_hz", "kappa_hz", "g_hz", "n_th", "q_factor"};
    for (const auto& a : axes)
        if (a == axis) return true;
    return false;
}

inline DensityMatrix vacuum_state(const SystemParams& p) {
    return projector(basis_state({2, p.fock_dim}, {0, 0}));
}

inline DensityMatrix initial_state(const SystemParams& p, InitialState which) {
    if (which == InitialState::vacuum) return vacuum_state(p);
    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    return steadystate_direct(L);
}

inline double transient_seconds(const SystemParams& p, const SolverSettings& s) {
    const double relax = std::max(p.kappa * (2.0 * p.n_th + 1.0), 1e-300);
    return s.transient_over_kappa / relax;
}

using ObsMap = std::map<std::string, double>;

inline ObsMap state_observables(const DensityMatrix& rho, const SystemParams& p) {
    const CompositeOps ops(p.fock_dim);
    ObsMap m;
    m["n_mean"] = real_expect(ops.n, rho);
    try {
        m["g2_0"] = g2_zero(rho);
    } catch (const UndefinedCorrelationError&) {
        m["g2_0"] = std::numeric_limits<double>::quiet_NaN();
    }
    for (int n = 0; n <= 3 && n < p.fock_dim; ++n)
        m["p" + std::to_string(n)] = real_expect(fock_projector(n, p.fock_dim), rho);
    const DetectionQuantities det = detection_quantities(rho);
    m["p_e"] = det.p_e;
    m["p_2"] = det.p_2;
    m["r"] = det.ratio_valid ? det.ratio : std::numeric_limits<double>::quiet_NaN();
    m["fidelity"] = truncation_fidelity(rho);
    return m;
}

inline ObsMap run_effective_static_point(const SystemParams& p) {
    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    const DensityMatrix rho = steadystate_direct(L);
    return state_observables(rho, p);
}

struct LabPointResult {
    ObsMap obs;
    TimeAvgResult avg;
    LindbladModel model;
};

inline LabPointResult run_lab_point(const SystemParams& p, const SolverSettings& s) {
    LabPointResult out;
    out.model = lab_model(p);
    const CompositeOps ops(p.fock_dim);
    NamedOps watch = {{"n_mean", ops.n}};
    TimeAvgOptions topt;
    topt.transient = transient_seconds(p, s);
    topt.window = s.window_periods * two_pi / drive_frequency(p);
    topt.samples_per_window = s.samples_per_window;
    topt.drift_tol = s.drift_tol;
    topt.max_windows = s.max_windows;
    topt.evolve.integrator.rtol = s.rtol;
    topt.evolve.integrator.atol = s.atol;
    topt.evolve.interaction_picture = s.interaction_picture;
    out.avg = steadystate_timeavg(out.model, initial_state(p, s.init), watch, topt);
    out.obs = state_observables(out.avg.rho_avg, p);
    out.obs["n_mean_pp"] = out.avg.peak_to_peak.front();
    return out;
}

inline ObsMap run_analytic_point(const SystemParams& p) {
    const DerivedParams d = derive(p);
    ObsMap m;
    m["g2_0"] = g2_analytic(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    const AnalyticAmplitudes a = steady_amplitudes(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    m["c1g_sq"] = a.p1g();
    m["c2g_sq"] = a.p2g();
    m["c0e_sq"] = a.p0e();
    m["lambda_hz"] = d.lambda_eff / two_pi;
    m["blockade_ratio"] = blockade_condition(p.epsilon, p.kappa, p.gamma, d.lambda_eff).ratio;
    return m;
}

inline ObsMap run_oracle_point(const SystemParams& p) {
    const DerivedParams d = derive(p);
    const OracleResult o = four_state_oracle(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    ObsMap m;
    m["g2_0"] = o.g2;
    m["c1g_sq"] = o.amplitudes.p1g();
    m["c2g_sq"] = o.amplitudes.p2g();
    m["c0e_sq"] = o.amplitudes.p0e();
    m["p_e"] = o.amplitudes.p0e();
    m["p_2"] = o.amplitudes.p2g();
    m["r"] = o.amplitudes.p2g() > 1e-300 ? o.amplitudes.p0e() / o.amplitudes.p2g()
                                         : std::numeric_limits<double>::quiet_NaN();
    m["lambda_hz"] = d.lambda_eff / two_pi;
    return m;
}

inline const std::vector<std::string>& pipeline_keys(Pipeline p) {
    static const std::vector<std::string> lab = {"n_mean", "g2_0", "p0", "p1", "p2", "p3",
                                                 "p_e", "p_2", "r", "fidelity", "n_mean_pp"};
    static const std::vector<std::string> stat = {"n_mean", "g2_0", "p0", "p1", "p2", "p3",
                                                  "p_e", "p_2", "r", "fidelity"};
    static const std::vector<std::string> ana = {"g2_0", "c1g_sq", "c2g_sq", "c0e_sq",
                                                 "lambda_hz", "blockade_ratio"};
    static const std::vector<std::string> orc = {"g2_0", "c1g_sq", "c2g_sq", "c0e_sq",
                                                 "p_e", "p_2", "r", "lambda_hz"};
    switch (p) {
        case Pipeline::lab_frame: return lab;
        case Pipeline::effective_static: return stat;
        case Pipeline::analytic: return ana;
        case Pipeline::oracle: return orc;
    }
    return lab;
}

inline std::string canonical_string(const Scenario& sc) {
    std::ostringstream os;
    os << sc.name << "|kind=" << int(sc.kind) << "|pipe=" << to_string(sc.pipeline)
       << "|res_auto=" << sc.resonant_delta_auto;
    const SystemParams& p = sc.base;
    os << "|sys=" << format_double(p.omega0) << "," << format_double(p.g) << ","
       << format_double(p.omega_p_drive) << "," << format_double(p.delta) << ","
       << format_double(p.epsilon) << "," << format_double(p.delta_d) << ","
       << format_double(p.gamma) << "," << format_double(p.gamma_phi) << ","
       << format_double(p.kappa) << "," << format_double(p.n_th) << "," << p.fock_dim;
    const SolverSettings& s = sc.solver;
    os << "|solver=" << format_double(s.rtol) << "," << format_double(s.atol) << ","
       << s.interaction_picture << "," << int(s.init) << "," << format_double(s.transient_over_kappa)
       << "," << format_double(s.window_periods) << "," << s.samples_per_window << ","
       << format_double(s.drift_tol) << "," << s.max_windows << "," << s.g2_phases;
    for (std::size_t a = 0; a < sc.axis_names.size(); ++a) {
        os << "|axis:" << sc.axis_names[a] << "=";
        for (double v : sc.axis_grids[a]) os << format_double(v) << ";";
    }
    os << "|obs=";
    for (const auto& o : sc.observables) os << o << ";";
    return os.str();
}

}  // namespace detail

// Structural checks; throws InvalidParameterError on an unrunnable scenario.
inline void validate_scenario(const Scenario& sc) {
    sc.base.check();
    if (sc.base.omega0 <= 0) throw InvalidParameterError("scenario: omega0 must be positive");
    if (sc.axis_names.size() != sc.axis_grids.size())
        throw InvalidParameterError("scenario: one grid per axis required");
    if (sc.kind == ScenarioKind::parameter_sweep) {
        if (sc.axis_names.empty()) throw InvalidParameterError("scenario: no sweep axis");
        for (const auto& gridv : sc.axis_grids)
            if (gridv.empty()) throw InvalidParameterError("scenario: empty sweep grid");
        for (const auto& gridv : sc.axis_grids)
            for (std::size_t i = 1; i < gridv.size(); ++i)
                if (gridv[i] <= gridv[i - 1])
                    throw InvalidParameterError("scenario: sweep grid must be strictly increasing");
        for (const auto& a : sc.axis_names)
            if (!detail::axis_is_sweepable(a))
                throw InvalidParameterError("scenario: cannot sweep '" + a + "'");
        const auto& keys = detail::pipeline_keys(sc.pipeline);
        for (const auto& o : sc.observables) {
            bool ok = false;
            for (const auto& k : keys) ok = ok || (k == o);
            if (!ok)
                throw InvalidParameterError("scenario: observable '" + o + "' is not produced by pipeline " +
                                            to_string(sc.pipeline));
        }
        if (sc.observables.empty()) throw InvalidParameterError("scenario: no observables requested");
    }
    if (sc.solver.rtol <= 0 || sc.solver.atol <= 0)
        throw InvalidParameterError("scenario: tolerances must be positive");
    if (sc.solver.threads < 1) throw InvalidParameterError("scenario: threads must be >= 1");
}

namespace detail {

inline void run_sweep_rows(const Scenario& sc, SweepResult& result) {
    // cartesian product over axes, row-major in grid order
    std::vector<std::vector<double>> points;
    std::vector<double> current(sc.axis_names.size());
    std::function<void(std::size_t)> expand = [&](std::size_t level) {
        if (level == sc.axis_names.size()) {
            points.push_back(current);
            return;
        }
        for (double v : sc.axis_grids[level]) {
            current[level] = v;
            expand(level + 1);
        }
    };
    expand(0);

    result.rows.assign(points.size(), {});
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            SweepRow& row = result.rows[i];
            row.params = points[i];
            try {
                SystemParams p = sc.base;
                for (std::size_t a = 0; a < sc.axis_names.size(); ++a)
                    apply_axis(p, sc.axis_names[a], points[i][a]);
                if (sc.resonant_delta_auto) p.delta = resonant_delta(p);
                ObsMap m;
                switch (sc.pipeline) {
                    case Pipeline::lab_frame: m = run_lab_point(p, sc.solver).obs; break;
                    case Pipeline::effective_static: m = run_effective_static_point(p); break;
                    case Pipeline::analytic: m = run_analytic_point(p); break;
                    case Pipeline::oracle: m = run_oracle_point(p); break;
                }
                row.obs.reserve(sc.observables.size());
                for (const auto& name : sc.observables) row.obs.push_back(m.at(name));
            } catch (const std::exception& e) {
                row.error = e.what();
                row.obs.assign(sc.observables.size(), std::numeric_limits<double>::quiet_NaN());
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(sc.solver.threads, int(points.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
}

inline void run_rabi_series(const Scenario& sc, SweepResult& result) {
    SystemParams p = sc.base;
    if (sc.resonant_delta_auto) p.delta = resonant_delta(p);
    const auto& t_grid_us = sc.axis_grids.at(0);
    std::vector<double> times;
    times.reserve(t_grid_us.size());
    for (double t : t_grid_us) times.push_back(t * 1e-6);

    const TimeDependentHamiltonian H = lab_hamiltonian(p);
    const StateVector psi0 = basis_state({2, p.fock_dim}, {1, 0});  // |e,0>
    NamedOps watch = {
        {"p_0e", projector_op(basis_state({2, p.fock_dim}, {1, 0}))},
        {"p_2g", projector_op(basis_state({2, p.fock_dim}, {0, 2}))},
    };
    EvolveOptions opts;
    opts.integrator.rtol = sc.solver.rtol;
    opts.integrator.atol = sc.solver.atol;
    opts.interaction_picture = sc.solver.interaction_picture;
    const Trajectory traj = schrodinger_evolve(H, psi0, times, watch, opts);

    result.rows.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        SweepRow row;
        row.params = {traj.times[k] * 1e6};
        row.obs = {traj.values[k][0], traj.values[k][1]};
        result.rows.push_back(std::move(row));
    }
}

inline void run_time_series(const Scenario& sc, SweepResult& result) {
    SystemParams p = sc.base;
    if (sc.resonant_delta_auto) p.delta = resonant_delta(p);
    const auto& t_grid_us = sc.axis_grids.at(0);
    std::vector<double> times;
    for (double t : t_grid_us) times.push_back(t * 1e-6);

    const CompositeOps ops(p.fock_dim);
    NamedOps watch;
    for (int n = 0; n <= 3 && n < p.fock_dim; ++n)
        watch.emplace_back("p" + std::to_string(n), fock_projector(n, p.fock_dim));
    watch.emplace_back("n_mean", ops.n);

    EvolveOptions opts;
    opts.integrator.rtol = sc.solver.rtol;
    opts.integrator.atol = sc.solver.atol;
    opts.interaction_picture = sc.solver.interaction_picture;
    const Trajectory traj = mesolve(lab_model(p), vacuum_state(p), times, watch, opts);

    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        SweepRow row;
        row.params = {traj.times[k] * 1e6};
        row.obs = traj.values[k];
        result.rows.push_back(std::move(row));
    }
}

inline void run_tau_curve(const Scenario& sc, SweepResult& result) {
    // axis 0: optional secondary parameter; last axis: kappa*tau grid
    const bool has_param = sc.axis_names.size() == 2;
    const auto& ktau_grid = sc.axis_grids.back();
    const std::vector<double> param_grid =
        has_param ? sc.axis_grids.front() : std::vector<double>{0.0};

    for (double pv : param_grid) {
        SystemParams p = sc.base;
        if (has_param) apply_axis(p, sc.axis_names.front(), pv);
        if (sc.resonant_delta_auto) p.delta = resonant_delta(p);

        LabPointResult point = run_lab_point(p, sc.solver);
        std::vector<double> taus;
        taus.reserve(ktau_grid.size());
        for (double kt : ktau_grid) taus.push_back(kt / p.kappa);

        EvolveOptions opts;
        opts.integrator.rtol = sc.solver.rtol;
        opts.integrator.atol = sc.solver.atol;
        opts.interaction_picture = sc.solver.interaction_picture;
        const double nbar = point.obs.at("n_mean");
        const CorrelationCurve curve =
            g2_tau_phase_averaged(point.model, point.avg.rho_final, point.avg.t_final, nbar, taus,
                                  sc.solver.g2_phases, opts);
        for (std::size_t k = 0; k < curve.taus.size(); ++k) {
            SweepRow row;
            if (has_param) row.params = {pv, ktau_grid[k]};
            else row.params = {ktau_grid[k]};
            row.obs = {curve.values[k]};
            result.rows.push_back(std::move(row));
        }
    }
}

}  // namespace detail

inline SweepResult run(const Scenario& sc) {
    validate_scenario(sc);
    const auto t_start = std::chrono::steady_clock::now();
    SweepResult result;
    result.scenario = sc.name;
    result.param_names = sc.axis_names;
    result.obs_names = sc.observables;
    result.config_hash = [&] {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(detail::canonical_string(sc))));
        return std::string(buf);
    }();
    {
        std::ostringstream os;
        os << "pipeline=" << to_string(sc.pipeline) << " rtol=" << sc.solver.rtol
           << " ip=" << sc.solver.interaction_picture
           << " transient/kappa=" << sc.solver.transient_over_kappa
           << " window_periods=" << sc.solver.window_periods;
        result.solver_digest = os.str();
    }

    switch (sc.kind) {
        case ScenarioKind::parameter_sweep: detail::run_sweep_rows(sc, result); break;
        case ScenarioKind::rabi_series: detail::run_rabi_series(sc, result); break;
        case ScenarioKind::time_series: detail::run_time_series(sc, result); break;
        case ScenarioKind::tau_curve: detail::run_tau_curve(sc, result); break;
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

// UTF-8 CSV: one '#' metadata line with the config hash, a header of parameter
// then observable columns, then one row per grid point. Failed rows carry NaN
// observables and a '#error' comment line directly below.
inline void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
    if (result.rows.empty()) throw InvalidParameterError("emit_csv: result has no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_csv: cannot open '" + path.string() + "' for writing");
    out << "# cfg=" << result.config_hash << "\n";
    for (std::size_t i = 0; i < result.param_names.size(); ++i) {
        if (i) out << ",";
        out << result.param_names[i];
    }
    for (const auto& name : result.obs_names) out << "," << name;
    out << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.params.size(); ++i) {
            if (i) out << ",";
            out << format_double(row.params[i]);
        }
        for (double v : row.obs) out << "," << format_double(v);
        out << "\n";
        if (!row.error.empty()) out << "#error " << row.error << "\n";
    }
    if (!out) throw IoError("emit_csv: write failed for '" + path.string() + "'");
}

}  // namespace pbsim

#endif
