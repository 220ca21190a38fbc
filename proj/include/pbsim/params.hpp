#ifndef PBSIM_PARAMS_HPP
#define PBSIM_PARAMS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "types.hpp"

namespace pbsim {

namespace constants {
constexpr double hbar = 1.054571817e-34;        // J s
constexpr double elementary_charge = 1.602176634e-19;  // C
constexpr double k_boltzmann = 1.380649e-23;    // J/K
constexpr double planck_h = 6.62607015e-34;     // J s
constexpr double flux_quantum = planck_h / (2.0 * elementary_charge);  // Wb
}  // namespace constants

// Model parameters, all angular frequencies/rates in rad/s. Conversion from
// cycle units (Hz) happens only at the config/CLI boundary.
struct SystemParams {
    double omega0 = 0.0;         // resonator frequency
    double g = 0.0;              // longitudinal coupling
    double omega_p_drive = 0.0;  // qubit Rabi strength Omega_p
    double delta = 0.0;          // qubit drive detuning Delta = omega_q - omega_p
    double epsilon = 0.0;        // resonator drive strength
    double delta_d = 0.0;        // mechanical drive detuning Delta_d = omega0' - omega_f
    double gamma = 0.0;          // qubit decay
    double gamma_phi = 0.0;      // qubit pure dephasing
    double kappa = 0.0;          // resonator decay
    double n_th = 0.0;           // thermal occupation of the mechanical bath
    Eigen::Index fock_dim = 10;

    void check() const {
        if (gamma < 0 || gamma_phi < 0 || kappa < 0)
            throw InvalidParameterError("SystemParams: negative rate");
        if (n_th < 0) throw InvalidParameterError("SystemParams: n_th < 0");
        if (fock_dim < 2) throw InvalidParameterError("SystemParams: fock_dim < 2");
    }
};

// Quantities induced by the qubit drive: the two-phonon coupling lambda, the
// dressed splitting, the renormalized resonator frequency, and the mixing angle.
struct DerivedParams {
    double lambda_eff = 0.0;   // 2 Omega_p g^2 / omega0^2
    double delta_tilde = 0.0;  // sqrt(Delta^2/4 + Omega_p^2)
    double omega0_prime = 0.0; // omega0 - 4 Omega_p^2 lambda^2 / (3 omega0^3)
    double theta = 0.0;        // atan(2 Omega_p / Delta)
    double beta = 0.0;         // g / omega0
};

inline DerivedParams derive(const SystemParams& p) {
    if (p.omega0 <= 0) throw InvalidParameterError("derive: omega0 must be positive");
    DerivedParams d;
    d.lambda_eff = 2.0 * p.omega_p_drive * p.g * p.g / (p.omega0 * p.omega0);
    d.delta_tilde = std::sqrt(p.delta * p.delta / 4.0 + p.omega_p_drive * p.omega_p_drive);
    d.omega0_prime = p.omega0 - 4.0 * p.omega_p_drive * p.omega_p_drive * d.lambda_eff * d.lambda_eff /
                                    (3.0 * p.omega0 * p.omega0 * p.omega0);
    d.theta = std::atan2(2.0 * p.omega_p_drive, p.delta);
    d.beta = p.g / p.omega0;
    return d;
}

// Detuning that places the dressed qubit splitting on the two-phonon
// resonance, delta_tilde = omega0'.
inline double resonant_delta(const SystemParams& p) {
    const DerivedParams d = derive(p);
    if (d.omega0_prime <= p.omega_p_drive)
        throw InvalidParameterError("resonant_delta: omega0' <= Omega_p, no resonant detuning exists");
    return 2.0 * std::sqrt(d.omega0_prime * d.omega0_prime - p.omega_p_drive * p.omega_p_drive);
}

// Resonator drive frequency implied by the detuning convention.
inline double drive_frequency(const SystemParams& p) { return derive(p).omega0_prime - p.delta_d; }

// Parameter-regime diagnostics. The separation-of-scales condition
// Delta ~ 2 omega0 >> max{g, Omega_p} >= min{g, Omega_p} >> epsilon is checked
// with ratio thresholds; factor 5 marks the boundary of "much greater".
struct ValidityReport {
    bool ok = true;
    std::vector<std::string> warnings;
};

inline ValidityReport check_validity(const SystemParams& p, double ratio_threshold = 5.0) {
    ValidityReport r;
    const double big = std::max(p.g, p.omega_p_drive);
    const double small = std::min(p.g, p.omega_p_drive);
    if (big > 0 && p.delta / big < ratio_threshold) {
        r.ok = false;
        r.warnings.push_back("Delta / max{g, Omega_p} = " + std::to_string(p.delta / big) +
                             " below threshold " + std::to_string(ratio_threshold));
    }
    if (p.epsilon > 0 && small / p.epsilon < ratio_threshold) {
        r.ok = false;
        r.warnings.push_back("min{g, Omega_p} / epsilon = " + std::to_string(small / p.epsilon) +
                             " below threshold " + std::to_string(ratio_threshold));
    }
    if (p.omega0 > 0 && std::abs(p.delta - 2.0 * p.omega0) > 0.25 * p.omega0) {
        r.ok = false;
        r.warnings.push_back("Delta is far from 2 omega0 (red-sideband condition)");
    }
    return r;
}

// Thermal occupation of a mode of frequency omega0 (rad/s) in a bath at
// temperature T (kelvin).
inline double n_th_from_temperature(double omega0, double temperature) {
    if (temperature <= 0) return 0.0;
    const double x = constants::hbar * omega0 / (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

// Device geometry of the coupled resonator / charge-qubit circuit. SI units.
struct DeviceGeometry {
    double e_c = 0.0;     // charging energy (J)
    double e_j = 0.0;     // Josephson energy (J)
    double c0 = 0.0;      // coupling capacitance at rest (F)
    double v0 = 0.0;      // static bias voltage (V)
    double d = 0.0;       // qubit-resonator gap (m)
    double x0 = 0.0;      // zero-point amplitude sqrt(hbar / 2 m omega0) (m)
    double b0 = 0.0;      // static magnetic field (T)
    double i0 = 0.0;      // drive current amplitude (A)
    double length = 0.0;  // resonator length (m)
    double mutual = 0.0;  // mutual inductance to the microwave line (H)
    double i_p = 0.0;     // microwave current amplitude (A)
    double n_g = 0.5;     // gate charge

    void check() const {
        if (e_c <= 0 || e_j <= 0 || c0 <= 0 || d <= 0 || x0 <= 0 || length <= 0)
            throw InvalidParameterError("DeviceGeometry: non-positive magnitude");
    }

    // Dephasing suppression holds only near the charge degeneracy point.
    bool near_degeneracy_point(double tol = 0.05) const { return std::abs(n_g - 0.5) < tol; }
};

inline double zero_point_amplitude(double mass, double omega0) {
    if (mass <= 0 || omega0 <= 0) throw InvalidParameterError("zero_point_amplitude: non-positive input");
    return std::sqrt(constants::hbar / (2.0 * mass * omega0));
}

// g = 2 E_c C0 V0 X0 / (e d hbar)
inline double coupling_from_geometry(const DeviceGeometry& dev) {
    if (dev.d <= 0 || dev.e_c <= 0 || dev.c0 <= 0 || dev.x0 <= 0)
        throw InvalidParameterError("coupling_from_geometry: non-positive geometry");
    return 2.0 * dev.e_c * dev.c0 * dev.v0 * dev.x0 /
           (constants::elementary_charge * dev.d * constants::hbar);
}

// epsilon = B0 I0 L X0 / hbar (Lorentz-force drive)
inline double drive_from_lorentz(const DeviceGeometry& dev) {
    if (dev.length <= 0 || dev.x0 <= 0)
        throw InvalidParameterError("drive_from_lorentz: non-positive geometry");
    return dev.b0 * dev.i0 * dev.length * dev.x0 / constants::hbar;
}

// Omega_p = pi E_J M I_p / (hbar Phi_0)
inline double rabi_from_line(const DeviceGeometry& dev) {
    if (dev.e_j <= 0 || dev.mutual <= 0)
        throw InvalidParameterError("rabi_from_line: non-positive geometry");
    return pi * dev.e_j * dev.mutual * dev.i_p / (constants::hbar * constants::flux_quantum);
}

}  // namespace pbsim

#endif
