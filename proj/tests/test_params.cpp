#include <catch2/catch_amalgamated.hpp>

#include <pbsim/params.hpp>

using namespace pbsim;
using Catch::Approx;

namespace {

SystemParams paper_point() {
    SystemParams p;
    p.omega0 = two_pi * 1e9;
    p.g = two_pi * 80e6;
    p.omega_p_drive = two_pi * 100e6;
    p.epsilon = two_pi * 0.2e6;
    p.gamma = two_pi * 1e6;
    p.kappa = two_pi * 0.2e6;
    return p;
}

}  // namespace

TEST_CASE("derived coupling matches the closed forms") {
    SystemParams p = paper_point();
    p.delta = resonant_delta(p);
    const DerivedParams d = derive(p);
    REQUIRE(d.lambda_eff / two_pi == Approx(1.28e6).epsilon(1e-12));
    REQUIRE(d.beta == Approx(0.08));
    REQUIRE(d.theta == Approx(std::atan2(2.0 * p.omega_p_drive, p.delta)).epsilon(1e-12));
    REQUIRE(d.theta == Approx(0.10026).margin(2e-4));
    // omega0' barely shifts at these parameters
    REQUIRE(std::abs(d.omega0_prime - p.omega0) / p.omega0 < 1e-6);
}

TEST_CASE("g = Omega_p = 0.1 w0 gives lambda = w0/500 exactly") {
    SystemParams p;
    p.omega0 = two_pi * 1e9;
    p.g = 0.1 * p.omega0;
    p.omega_p_drive = 0.1 * p.omega0;
    const DerivedParams d = derive(p);
    REQUIRE(d.lambda_eff == Approx(p.omega0 / 500.0).epsilon(1e-12));
}

TEST_CASE("undriven qubit limit") {
    SystemParams p = paper_point();
    p.omega_p_drive = 0.0;
    p.delta = two_pi * 2e9;
    const DerivedParams d = derive(p);
    REQUIRE(d.lambda_eff == 0.0);
    REQUIRE(d.delta_tilde == Approx(p.delta / 2.0));
    REQUIRE(d.theta == 0.0);
}

TEST_CASE("derive is scale covariant") {
    SystemParams p = paper_point();
    p.delta = two_pi * 1.99e9;
    const DerivedParams d1 = derive(p);
    const double s = 3.7;
    SystemParams q = p;
    q.omega0 *= s;
    q.g *= s;
    q.omega_p_drive *= s;
    q.delta *= s;
    const DerivedParams d2 = derive(q);
    REQUIRE(d2.lambda_eff == Approx(s * d1.lambda_eff).epsilon(1e-12));
    REQUIRE(d2.delta_tilde == Approx(s * d1.delta_tilde).epsilon(1e-12));
    REQUIRE(d2.theta == Approx(d1.theta).epsilon(1e-12));
    REQUIRE(d2.beta == Approx(d1.beta).epsilon(1e-12));
}

TEST_CASE("derive rejects non-positive omega0") {
    SystemParams p = paper_point();
    p.omega0 = 0.0;
    REQUIRE_THROWS_AS(derive(p), InvalidParameterError);
}

TEST_CASE("resonant detuning solves delta_tilde = omega0'") {
    SystemParams p = paper_point();

    SECTION("paper numbers") {
        p.delta = resonant_delta(p);
        REQUIRE(p.delta / two_pi == Approx(2.0 * std::sqrt(1e18 - 1e16)).epsilon(1e-6));
        REQUIRE(p.delta / two_pi == Approx(1989.97e6).epsilon(1e-4));
        const DerivedParams d = derive(p);
        REQUIRE(d.delta_tilde == Approx(d.omega0_prime).epsilon(1e-12));
    }
    SECTION("no qubit drive") {
        p.omega_p_drive = 0.0;
        const DerivedParams d = derive(p);
        REQUIRE(resonant_delta(p) == Approx(2.0 * d.omega0_prime).epsilon(1e-12));
    }
    SECTION("no resonance when Omega_p exceeds omega0'") {
        p.omega_p_drive = two_pi * 1.5e9;
        REQUIRE_THROWS_AS(resonant_delta(p), InvalidParameterError);
    }
}

TEST_CASE("validity thresholds follow the ratio-5 rule") {
    SystemParams p = paper_point();
    p.delta = resonant_delta(p);
    REQUIRE(check_validity(p).ok);

    SystemParams strained = p;
    strained.epsilon = two_pi * 40e6;  // min(g, Omega_p)/eps = 2
    REQUIRE_FALSE(check_validity(strained).ok);

    strained = p;
    strained.omega_p_drive = two_pi * 450e6;  // Delta/max ratio < 5
    strained.delta = resonant_delta(strained);
    REQUIRE_FALSE(check_validity(strained).ok);
}

TEST_CASE("thermal occupation from temperature") {
    const double w0 = two_pi * 1e9;
    // hbar w0 / kB T = ln 2  ->  n_th = 1
    const double t_ln2 = constants::hbar * w0 / (constants::k_boltzmann * std::log(2.0));
    REQUIRE(n_th_from_temperature(w0, t_ln2) == Approx(1.0).epsilon(1e-12));
    // 1 GHz mode at 10 mK: occupation of order 1e-3
    const double n10mk = n_th_from_temperature(w0, 0.010);
    REQUIRE(n10mk > 1e-3);
    REQUIRE(n10mk < 1.5e-2);
    REQUIRE(n_th_from_temperature(w0, 0.0) == 0.0);
}

TEST_CASE("coupling from geometry is linear in the bias") {
    DeviceGeometry dev;
    dev.e_c = 1.6e-23;
    dev.e_j = 8e-24;
    dev.c0 = 4e-17;
    dev.v0 = 0.5;
    dev.d = 1e-7;
    dev.x0 = 2e-13;
    dev.b0 = 0.1;
    dev.i0 = 1e-6;
    dev.length = 3e-6;
    dev.mutual = 1e-11;
    dev.i_p = 1e-7;
    dev.check();

    const double g1 = coupling_from_geometry(dev);
    DeviceGeometry doubled = dev;
    doubled.v0 *= 2;
    REQUIRE(coupling_from_geometry(doubled) == Approx(2.0 * g1).epsilon(1e-12));
    DeviceGeometry unbiased = dev;
    unbiased.v0 = 0.0;
    REQUIRE(coupling_from_geometry(unbiased) == 0.0);

    SECTION("invert for the bias that gives g/2pi = 80 MHz, then round-trip") {
        const double target = two_pi * 80e6;
        DeviceGeometry solved = dev;
        solved.v0 = target * constants::elementary_charge * dev.d * constants::hbar /
                    (2.0 * dev.e_c * dev.c0 * dev.x0);
        REQUIRE(coupling_from_geometry(solved) == Approx(target).epsilon(1e-12));
    }
}

TEST_CASE("lorentz drive strength and line Rabi frequency") {
    DeviceGeometry dev;
    dev.e_c = 1.6e-23;
    dev.e_j = 8e-24;
    dev.c0 = 4e-17;
    dev.v0 = 0.5;
    dev.d = 1e-7;
    dev.x0 = 2e-13;
    dev.b0 = 0.1;
    dev.i0 = 1e-6;
    dev.length = 3e-6;
    dev.mutual = 1e-11;
    dev.i_p = 1e-7;

    const double e1 = drive_from_lorentz(dev);
    DeviceGeometry stronger = dev;
    stronger.b0 *= 3.0;
    REQUIRE(drive_from_lorentz(stronger) == Approx(3.0 * e1).epsilon(1e-12));
    DeviceGeometry off = dev;
    off.i0 = 0.0;
    REQUIRE(drive_from_lorentz(off) == 0.0);

    SECTION("invert for the line current giving Omega_p/2pi = 100 MHz") {
        const double target = two_pi * 100e6;
        DeviceGeometry solved = dev;
        solved.i_p = target * constants::hbar * constants::flux_quantum /
                     (pi * dev.e_j * dev.mutual);
        REQUIRE(rabi_from_line(solved) == Approx(target).epsilon(1e-12));
    }
}

TEST_CASE("geometry guards") {
    DeviceGeometry dev;
    REQUIRE_THROWS_AS(dev.check(), InvalidParameterError);
    REQUIRE_THROWS_AS(zero_point_amplitude(-1.0, 1.0), InvalidParameterError);
    DeviceGeometry g;
    g.n_g = 0.5;
    REQUIRE(g.near_degeneracy_point());
    g.n_g = 0.3;
    REQUIRE_FALSE(g.near_degeneracy_point());
}

TEST_CASE("system params guards") {
    SystemParams p = paper_point();
    p.gamma = -1.0;
    REQUIRE_THROWS_AS(p.check(), InvalidParameterError);
    p = paper_point();
    p.fock_dim = 1;
    REQUIRE_THROWS_AS(p.check(), InvalidParameterError);
    p = paper_point();
    p.n_th = -0.5;
    REQUIRE_THROWS_AS(p.check(), InvalidParameterError);
}
