#ifndef PBSIM_STEADYSTATE_HPP
#define PBSIM_STEADYSTATE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "dynamics.hpp"
#include "liouvillian.hpp"
#include "types.hpp"

namespace pbsim {

namespace detail {

inline Matrix solve_with_trace_row(const Matrix& L_dense, Eigen::Index n, Eigen::Index replaced_diag) {
    Matrix A = L_dense;
    const Eigen::Index row = replaced_diag * n + replaced_diag;  // a diagonal vec position
    A.row(row).setZero();
    for (Eigen::Index i = 0; i < n; ++i) A(row, i * n + i) = 1.0;
    Vector rhs = Vector::Zero(n * n);
    rhs(row) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(A);
    const Vector x = lu.solve(rhs);

    // pivot-based conditioning estimate; a degenerate null space leaves the
    // trace-constrained system singular no matter which row was replaced
    const auto& U = lu.matrixLU();
    double umax = 0.0, umin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        const double u = std::abs(U(i, i));
        umax = std::max(umax, u);
        umin = std::min(umin, u);
    }
    const double pivot_ratio = umin / std::max(umax, 1e-300);
    if (!x.allFinite() || pivot_ratio < 1e-14)
        throw SingularSystemError("steadystate_direct: singular solve, pivot ratio " +
                                  std::to_string(pivot_ratio));
    return unvec(x, n);
}

}  // namespace detail

// Exact stationary state of a static generator: L vec(rho) = 0 with the unit
// trace imposed by replacing one (diagonal-position) row by the vectorized
// trace row. A second solve with a different replaced row guards against a
// degenerate null space.
inline DensityMatrix steadystate_direct(const Liouvillian& L, double degeneracy_tol = 1e-7) {
    const Eigen::Index n = L.hilbert_dim();
    const Matrix Ld = L.dense();
    Matrix rho = detail::solve_with_trace_row(Ld, n, 0);
    Matrix rho_b = detail::solve_with_trace_row(Ld, n, n - 1);
    if ((rho - rho_b).cwiseAbs().maxCoeff() > degeneracy_tol)
        throw SingularSystemError(
            "steadystate_direct: two trace-row solves disagree; the null space is degenerate "
            "(multiple steady states)");

    // residual against the full generator
    const Vector res = L.generator * vec(rho);
    const double scale = std::max(1.0, L.generator.norm());
    if (res.norm() > 1e-8 * scale)
        throw SingularSystemError("steadystate_direct: residual " + std::to_string(res.norm() / scale));

    rho = 0.5 * (rho + rho.adjoint().eval());
    DensityMatrix out(L.dims, std::move(rho));
    out.validate();
    return out;
}

struct TimeAvgOptions {
    double transient = 0.0;           // seconds before averaging starts
    double window = 0.0;              // averaging window length (seconds)
    int samples_per_window = 200;
    double drift_tol = 0.01;          // relative drift allowed between consecutive windows
    int max_windows = 8;              // extra windows tried before declaring non-convergence
    EvolveOptions evolve;
};

struct TimeAvgResult {
    DensityMatrix rho_avg;
    DensityMatrix rho_final;  // instantaneous state at t_final (end of the last window)
    double t_final = 0.0;
    std::vector<std::string> names;
    std::vector<double> means;
    std::vector<double> peak_to_peak;
    std::vector<double> drift;   // |mean - previous window mean| / scale
    int windows_used = 0;
    IntegratorStats stats;

    double mean_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return means[i];
        throw InvalidParameterError("TimeAvgResult: no observable named " + name);
    }
};

// Long-time windowed average for (possibly) periodically driven models:
// integrate past the transient, then average rho(t) and the observables
// uniformly over a window, repeating windows until consecutive window means
// agree within drift_tol.
inline TimeAvgResult steadystate_timeavg(const LindbladModel& model, const DensityMatrix& rho0,
                                         const NamedOps& observables, const TimeAvgOptions& opts) {
    if (opts.window <= 0) throw InvalidParameterError("steadystate_timeavg: window must be positive");
    const Eigen::Index n = rho0.size();
    detail::MasterRhs rhs(model, opts.evolve.interaction_picture);
    DormandPrince54 stepper([&rhs](double t, const Vector& v, Vector& out) { rhs(t, v, out); });

    TimeAvgResult result;
    for (const auto& [name, op] : observables) result.names.push_back(name);

    Vector y = rhs.from_lab(0.0, vec(rho0.data));
    double t = 0.0;
    if (opts.transient > 0) {
        auto st = stepper.integrate(0.0, opts.transient, y, opts.evolve.integrator);
        result.stats.n_steps += st.n_steps;
        result.stats.n_rejected += st.n_rejected;
        result.stats.n_rhs += st.n_rhs;
        t = opts.transient;
    }

    const int ns = std::max(2, opts.samples_per_window);
    std::vector<double> prev_means;
    for (int w = 0; w < std::max(1, opts.max_windows); ++w) {
        Matrix rho_acc = Matrix::Zero(n, n);
        std::vector<double> means(observables.size(), 0.0);
        std::vector<double> lo(observables.size(), std::numeric_limits<double>::infinity());
        std::vector<double> hi(observables.size(), -std::numeric_limits<double>::infinity());

        std::vector<double> sample_times(ns);
        for (int k = 0; k < ns; ++k) sample_times[k] = t + (k + 1) * opts.window / ns;

        auto record = [&](double ts, const Vector& v) {
            Matrix rho = unvec(rhs.to_lab(ts, v), n);
            rho = 0.5 * (rho + rho.adjoint().eval());
            rho_acc += rho;
            for (std::size_t i = 0; i < observables.size(); ++i) {
                const double val = observables[i].second.data.transpose().cwiseProduct(rho).sum().real();
                means[i] += val;
                lo[i] = std::min(lo[i], val);
                hi[i] = std::max(hi[i], val);
            }
        };
        auto st = stepper.integrate(t, t + opts.window, y, opts.evolve.integrator, sample_times, record);
        result.stats.n_steps += st.n_steps;
        result.stats.n_rejected += st.n_rejected;
        result.stats.n_rhs += st.n_rhs;
        t += opts.window;

        for (auto& m : means) m /= ns;
        rho_acc /= double(ns);

        bool settled = true;
        std::vector<double> drift(observables.size(), 0.0);
        if (!prev_means.empty()) {
            for (std::size_t i = 0; i < means.size(); ++i) {
                const double scale = std::max({std::abs(means[i]), std::abs(prev_means[i]), 1e-12});
                drift[i] = std::abs(means[i] - prev_means[i]) / scale;
                if (drift[i] > opts.drift_tol) settled = false;
            }
        } else {
            settled = false;  // need at least two windows to compare
        }
        prev_means = means;
        result.windows_used = w + 1;

        if (settled || w + 1 == std::max(1, opts.max_windows)) {
            if (!settled && opts.max_windows > 1)
                throw ConvergenceError(
                    "steadystate_timeavg: window means still drift by more than " +
                    std::to_string(100.0 * opts.drift_tol) + "% after " +
                    std::to_string(result.windows_used) + " windows");
            result.means = means;
            result.drift = drift;
            result.peak_to_peak.resize(observables.size());
            for (std::size_t i = 0; i < observables.size(); ++i)
                result.peak_to_peak[i] = hi[i] - lo[i];
            result.rho_avg = DensityMatrix(rho0.dims, std::move(rho_acc));
            result.rho_avg.validate(1e-6, 1e-8, -1e-6);
            Matrix rho_end = unvec(rhs.to_lab(t, y), n);
            rho_end = 0.5 * (rho_end + rho_end.adjoint().eval());
            result.rho_final = DensityMatrix(rho0.dims, std::move(rho_end));
            result.t_final = t;
            return result;
        }
    }
    throw ConvergenceError("steadystate_timeavg: unreachable");
}

}  // namespace pbsim

#endif
