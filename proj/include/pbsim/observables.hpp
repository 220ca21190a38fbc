#ifndef PBSIM_OBSERVABLES_HPP
#define PBSIM_OBSERVABLES_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "operators.hpp"
#include "types.hpp"

namespace pbsim {

namespace detail {

// The resonator is the last tensor factor by project convention.
inline Operator mode_annihilator(const std::vector<Eigen::Index>& dims) {
    if (dims.empty()) throw DimensionError("mode_annihilator: empty dims");
    Operator b = destroy(dims.back());
    if (dims.size() == 1) return b;
    std::vector<Eigen::Index> head(dims.begin(), dims.end() - 1);
    return tensor(identity(head), b);
}

}  // namespace detail

// g2(0) = Tr[b'b'bb rho] / Tr[b'b rho]^2 of the resonator mode.
inline double g2_zero(const DensityMatrix& rho) {
    const Operator b = detail::mode_annihilator(rho.dims);
    const Matrix bd = b.data.adjoint();
    const double nbar = (bd * b.data * rho.data).trace().real();
    if (nbar <= 1e-12)
        throw UndefinedCorrelationError("g2_zero: mean occupation " + std::to_string(nbar) +
                                        " is too small to normalize");
    const double num = (bd * bd * b.data * b.data * rho.data).trace().real();
    return num / (nbar * nbar);
}

struct CorrelationCurve {
    std::vector<double> taus;
    std::vector<double> values;
    double reference = 0.0;            // g2(0)
    double stationarity_defect = 0.0;  // ||L vec(rho)|| / ||L||, nonzero input drift
};

// Two-time correlation of a static generator via the quantum regression
// theorem: evolve X(0) = b rho_ss b' under the same Lindblad generator and
// read off g2(tau) = Tr[b'b X(tau)] / <b'b>_ss^2.
inline CorrelationCurve g2_tau(const LindbladModel& model, const DensityMatrix& rho_ss,
                               const std::vector<double>& taus, const EvolveOptions& opts = {}) {
    if (!model.hamiltonian.is_static())
        throw InvalidParameterError(
            "g2_tau: generator is time-dependent; use g2_tau_phase_averaged for driven models");
    if (taus.empty()) throw InvalidParameterError("g2_tau: empty tau grid");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (taus[i] <= taus[i - 1]) throw InvalidParameterError("g2_tau: taus must increase");

    const Operator b = detail::mode_annihilator(rho_ss.dims);
    const Operator n_op(b.dims, b.data.adjoint() * b.data);
    const double nbar = (n_op.data.transpose().cwiseProduct(rho_ss.data)).sum().real();
    if (nbar <= 1e-12) throw UndefinedCorrelationError("g2_tau: vanishing mean occupation");

    CorrelationCurve curve;
    curve.taus = taus;
    {
        const Liouvillian L = build_liouvillian(model.hamiltonian.static_part, model.c_ops);
        curve.stationarity_defect = (L.generator * vec(rho_ss.data)).norm() / std::max(L.generator.norm(), 1e-300);
    }

    const Operator x0(b.dims, b.data * rho_ss.data * b.data.adjoint());
    std::vector<Complex> samples;
    samples.reserve(taus.size());
    propagate_operator(model, x0, 0.0, taus.back(), opts, taus, &n_op, &samples);
    curve.values.reserve(samples.size());
    for (const Complex& s : samples) curve.values.push_back(s.real() / (nbar * nbar));
    curve.reference = g2_zero(rho_ss);
    return curve;
}

// Driven (time-dependent) generator version: curves are averaged over
// n_phases start times t0 spanning one drive period in the settled regime;
// the normalization uses the window-averaged occupation at both times.
inline CorrelationCurve g2_tau_phase_averaged(const LindbladModel& model, const DensityMatrix& rho_settled,
                                              double t_settled, double nbar_avg,
                                              const std::vector<double>& taus, int n_phases = 8,
                                              const EvolveOptions& opts = {}) {
    if (model.hamiltonian.is_static())
        return g2_tau(model, rho_settled, taus, opts);
    if (nbar_avg <= 1e-12) throw UndefinedCorrelationError("g2_tau_phase_averaged: vanishing occupation");
    if (n_phases < 1) throw InvalidParameterError("g2_tau_phase_averaged: n_phases < 1");

    const Operator b = detail::mode_annihilator(rho_settled.dims);
    const Operator n_op(b.dims, b.data.adjoint() * b.data);
    const double period = two_pi / model.hamiltonian.drives.front().freq;

    CorrelationCurve curve;
    curve.taus = taus;
    curve.values.assign(taus.size(), 0.0);

    Operator rho_t(rho_settled.dims, rho_settled.data);
    double t_cur = t_settled;
    for (int j = 0; j < n_phases; ++j) {
        const double t_j = t_settled + j * period / n_phases;
        if (t_j > t_cur) {
            rho_t = propagate_operator(model, rho_t, t_cur, t_j - t_cur, opts);
            t_cur = t_j;
        }
        const Operator x0(b.dims, b.data * rho_t.data * b.data.adjoint());
        std::vector<Complex> samples;
        propagate_operator(model, x0, t_j, taus.back(), opts, taus, &n_op, &samples);
        for (std::size_t i = 0; i < samples.size(); ++i)
            curve.values[i] += samples[i].real() / (nbar_avg * nbar_avg * n_phases);
    }
    curve.reference = curve.values.empty() ? 0.0 : curve.values.front();
    return curve;
}

// Summed population of {|g,0>, |g,1>, |g,2>, |e,0>}: the fidelity of the
// four-state truncation.
inline double truncation_fidelity(const DensityMatrix& rho) {
    if (rho.dims.size() != 2 || rho.dims[0] != 2 || rho.dims[1] < 3)
        throw DimensionError("truncation_fidelity: expected qubit x Fock dims with fock_dim >= 3");
    const Eigen::Index m = rho.dims[1];
    const auto pop = [&](Eigen::Index q, Eigen::Index n) { return rho.data(q * m + n, q * m + n).real(); };
    return pop(0, 0) + pop(0, 1) + pop(0, 2) + pop(1, 0);
}

struct DetectionQuantities {
    double p_e = 0.0;
    double p_2 = 0.0;
    double ratio = 0.0;
    bool ratio_valid = false;
};

// Qubit-based detection observables: excited-state population, two-phonon
// population, and their ratio R = P_e / P_2.
inline DetectionQuantities detection_quantities(const DensityMatrix& rho, double p2_floor = 1e-14) {
    if (rho.dims.size() != 2 || rho.dims[0] != 2 || rho.dims[1] < 3)
        throw DimensionError("detection_quantities: expected qubit x Fock dims with fock_dim >= 3");
    const Eigen::Index m = rho.dims[1];
    DetectionQuantities out;
    for (Eigen::Index n = 0; n < m; ++n) out.p_e += rho.data(m + n, m + n).real();
    out.p_2 = rho.data(2, 2).real() + rho.data(m + 2, m + 2).real();
    if (out.p_2 > p2_floor) {
        out.ratio = out.p_e / out.p_2;
        out.ratio_valid = true;
    }
    return out;
}

// Oscillation frequency of a population record via the peak of its discrete
// spectrum, returned as the transfer matrix element V: for P(t) = cos^2(V t)
// the spectrum peaks at 2V. Parabolic refinement around the grid peak.
inline double fit_rabi_frequency(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 16)
        throw InvalidParameterError("fit_rabi_frequency: need at least 16 samples");
    const double span = times.back() - times.front();
    if (span <= 0) throw InvalidParameterError("fit_rabi_frequency: empty time span");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= double(values.size());

    const double w_min = 0.5 * two_pi / span;
    const double dt_min = span / double(times.size() - 1);
    const double w_max = 0.8 * pi / dt_min;
    const int n_scan = 4000;
    auto power = [&](double w) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < times.size(); ++k)
            acc += (values[k] - mean) * std::exp(Complex(0.0, -w * times[k]));
        return std::norm(acc);
    };
    double best_w = w_min, best_p = -1.0;
    const double dw = (w_max - w_min) / (n_scan - 1);
    std::vector<double> ps(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        const double w = w_min + i * dw;
        ps[i] = power(w);
        if (ps[i] > best_p) {
            best_p = ps[i];
            best_w = w;
        }
    }
    // parabolic refinement on the log-power profile
    const int i0 = int((best_w - w_min) / dw + 0.5);
    if (i0 > 0 && i0 < n_scan - 1) {
        const double y1 = std::log(ps[i0 - 1] + 1e-300), y2 = std::log(ps[i0] + 1e-300),
                     y3 = std::log(ps[i0 + 1] + 1e-300);
        const double denom = y1 - 2.0 * y2 + y3;
        if (std::abs(denom) > 1e-12) best_w += 0.5 * dw * (y1 - y3) / denom;
    }
    return 0.5 * best_w;
}

}  // namespace pbsim

#endif
