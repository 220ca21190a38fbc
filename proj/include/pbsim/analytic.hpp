#ifndef PBSIM_ANALYTIC_HPP
#define PBSIM_ANALYTIC_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace pbsim {

// Steady-state amplitudes of the four-state expansion
// |psi> = C0g|g,0> + C1g|g,1> + C0e|e,0> + C2g|g,2>.
struct AnalyticAmplitudes {
    Complex c0g, c1g, c0e, c2g;
    bool validity_ok = true;
    std::vector<std::string> notes;

    double p0g() const { return std::norm(c0g); }
    double p1g() const { return std::norm(c1g); }
    double p0e() const { return std::norm(c0e); }
    double p2g() const { return std::norm(c2g); }
};

namespace detail {

inline void require_rates(double kappa, double gamma, double lambda) {
    if (kappa <= 0 || gamma <= 0 || lambda <= 0)
        throw InvalidParameterError("analytic theory requires kappa, gamma, lambda > 0");
}

}  // namespace detail

// Closed-form weak-drive amplitudes: |C1g|^2 = 4 eps^2 / (8 eps^2 + kappa^2),
// C2g = sqrt(2) eps C1g / (i (2 kappa + 4 lambda^2/Gamma)),
// C0e = 2 sqrt(2) lambda C2g / (i Gamma), with C1g chosen real positive and
// C0g following from the stationarity relation for C1g.
inline AnalyticAmplitudes steady_amplitudes(double epsilon, double kappa, double gamma, double lambda) {
    detail::require_rates(kappa, gamma, lambda);
    if (epsilon < 0) throw InvalidParameterError("steady_amplitudes: epsilon < 0");
    AnalyticAmplitudes a;
    if (epsilon == 0.0) {
        a.c0g = 1.0;
        a.c1g = a.c0e = a.c2g = 0.0;
        return a;
    }
    const double denom1 = 8.0 * epsilon * epsilon + kappa * kappa;
    const double denom2 = 2.0 * kappa + 4.0 * lambda * lambda / gamma;
    if (denom1 <= 0 || denom2 <= 0)
        throw InvalidParameterError("steady_amplitudes: zero denominator");
    a.c1g = std::sqrt(4.0 * epsilon * epsilon / denom1);
    a.c2g = std::sqrt(2.0) * epsilon * a.c1g / Complex(0.0, denom2);
    a.c0e = 2.0 * std::sqrt(2.0) * lambda * a.c2g / Complex(0.0, gamma);
    a.c0g = Complex(0.0, kappa / (2.0 * epsilon)) * a.c1g - std::sqrt(2.0) * a.c2g;

    const double head = a.p0g() + a.p1g();
    if (std::abs(head - 1.0) > 0.25) {
        a.validity_ok = false;
        a.notes.push_back("|C0g|^2 + |C1g|^2 = " + std::to_string(head) +
                          " deviates from 1; weak-drive expansion is strained");
    }
    if (a.p2g() > 0.1 * std::min(a.p0g(), a.p1g())) {
        a.validity_ok = false;
        a.notes.push_back("|C2g|^2 is not small against |C0g|^2, |C1g|^2");
    }
    return a;
}

// Closed-form zero-delay correlation of the four-state theory:
// g2(0) = (8 eps^2 + kappa^2) / (2 kappa + 4 lambda^2 / Gamma)^2.
inline double g2_analytic(double epsilon, double kappa, double gamma, double lambda) {
    detail::require_rates(kappa, gamma, lambda);
    const double denom = 2.0 * kappa + 4.0 * lambda * lambda / gamma;
    if (denom == 0.0) throw InvalidParameterError("g2_analytic: zero denominator");
    return (8.0 * epsilon * epsilon + kappa * kappa) / (denom * denom);
}

struct BlockadeDiagnostic {
    double coupling_scale = 0.0;  // 4 lambda^2 / Gamma
    double competing_scale = 0.0; // max(2 sqrt(2) eps, kappa)
    double ratio = 0.0;
    double threshold = 5.0;
    bool strong = false;
};

// Blockade condition 4 lambda^2 / Gamma >> max{2 sqrt(2) eps, kappa}, with
// ">>" quantified as ratio >= threshold (default 5).
inline BlockadeDiagnostic blockade_condition(double epsilon, double kappa, double gamma, double lambda,
                                             double threshold = 5.0) {
    if (gamma <= 0) throw InvalidParameterError("blockade_condition: gamma <= 0");
    BlockadeDiagnostic d;
    d.threshold = threshold;
    d.coupling_scale = 4.0 * lambda * lambda / gamma;
    d.competing_scale = std::max(2.0 * std::sqrt(2.0) * epsilon, kappa);
    d.ratio = d.competing_scale > 0 ? d.coupling_scale / d.competing_scale
                                    : std::numeric_limits<double>::infinity();
    d.strong = d.ratio >= threshold;
    return d;
}

struct OracleResult {
    AnalyticAmplitudes amplitudes;
    double g2 = 0.0;
};

// Brute-force four-state oracle: the exact stationary solution of the
// non-Hermitian equations of motion
//   0 = eps C0g - i kappa/2 C1g + sqrt(2) eps C2g
//   0 = sqrt(2) eps C1g - i kappa C2g + sqrt(2) lambda C0e
//   0 = sqrt(2) lambda C2g - i Gamma/2 C0e
// solved as a 3x3 linear system in the C0g = 1 gauge and then normalized to a
// unit-norm state. No weak-drive simplifications are applied, so this is the
// independent reference for the closed forms above.
inline OracleResult four_state_oracle(double epsilon, double kappa, double gamma, double lambda) {
    detail::require_rates(kappa, gamma, lambda);
    if (epsilon < 0) throw InvalidParameterError("four_state_oracle: epsilon < 0");
    OracleResult out;
    if (epsilon == 0.0) {
        out.amplitudes.c0g = 1.0;
        out.amplitudes.c1g = out.amplitudes.c0e = out.amplitudes.c2g = 0.0;
        out.g2 = std::numeric_limits<double>::quiet_NaN();  // no excitation to correlate
        return out;
    }
    const double s2 = std::sqrt(2.0);
    Eigen::Matrix3cd A;
    A << Complex(0.0, -0.5 * kappa), s2 * epsilon, 0.0,
         s2 * epsilon, Complex(0.0, -kappa), s2 * lambda,
         0.0, s2 * lambda, Complex(0.0, -0.5 * gamma);
    Eigen::Vector3cd rhs(-epsilon, 0.0, 0.0);
    Eigen::FullPivLU<Eigen::Matrix3cd> lu(A);
    if (!lu.isInvertible())
        throw SingularSystemError("four_state_oracle: stationary system is singular");
    const Eigen::Vector3cd x = lu.solve(rhs);

    Eigen::Vector4cd v;
    v << 1.0, x(0), x(1), x(2);
    v /= v.norm();
    out.amplitudes.c0g = v(0);
    out.amplitudes.c1g = v(1);
    out.amplitudes.c2g = v(2);
    out.amplitudes.c0e = v(3);
    const double p1 = std::norm(v(1));
    out.g2 = 2.0 * std::norm(v(2)) / (p1 * p1);
    return out;
}

}  // namespace pbsim

#endif
