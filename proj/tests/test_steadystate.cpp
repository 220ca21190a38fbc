#include <catch2/catch_amalgamated.hpp>

#include <pbsim/builtin_scenarios.hpp>
#include <pbsim/observables.hpp>
#include <pbsim/steadystate.hpp>

using namespace pbsim;
using Catch::Approx;

TEST_CASE("thermal detailed balance: Bose-Einstein populations at n_th = 1") {
    const Eigen::Index m = 40;
    const double kappa = two_pi * 1e6, n_th = 1.0;
    const Operator b = destroy(m);
    const Operator H({m}, Matrix::Zero(m, m));
    const Liouvillian L = build_liouvillian(
        H, {{b.adjoint(), kappa * n_th}, {b, kappa * (n_th + 1.0)}});
    const DensityMatrix rho = steadystate_direct(L);

    REQUIRE(real_expect(number(m), rho) == Approx(1.0).margin(1e-8));
    for (Eigen::Index n = 0; n < 6; ++n)
        REQUIRE(rho.data(n, n).real() == Approx(std::pow(0.5, double(n + 1))).margin(1e-9));
}

TEST_CASE("undriven effective model settles into the ground state") {
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    p.epsilon = 0.0;
    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    const DensityMatrix rho = steadystate_direct(L);
    REQUIRE(rho.data(0, 0).real() == Approx(1.0).margin(1e-9));
}

TEST_CASE("effective static steady state against the four-state closed form") {
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    const DensityMatrix rho = steadystate_direct(L);
    const double g2 = g2_zero(rho);
    const double g2_cf = g2_analytic(p.epsilon, p.kappa, p.gamma, derive(p).lambda_eff);
    // the closed form additionally truncates to four states; expect the same
    // scale, not equality
    REQUIRE(g2 < 2.0 * g2_cf);
    REQUIRE(g2 > 0.5 * g2_cf);
    REQUIRE(g2 <= 0.02);
    const CompositeOps ops(p.fock_dim);
    REQUIRE(real_expect(ops.n, rho) == Approx(0.44).margin(0.02));
}

TEST_CASE("long-time mesolve agrees with the null-space steady state") {
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    const LindbladModel model = effective_model(p);
    const Liouvillian L = build_liouvillian(model.hamiltonian.static_part, model.c_ops);
    const DensityMatrix rho_ss = steadystate_direct(L);

    DensityMatrix rho_end;
    EvolveOptions opts;
    opts.integrator.rtol = 1e-9;
    opts.integrator.atol = 1e-13;
    mesolve(model, projector(basis_state({2, p.fock_dim}, {0, 0})), {0.0, 20.0 / p.kappa}, {},
            opts, &rho_end);
    REQUIRE((rho_end.data - rho_ss.data).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("steadystate_direct reports a degenerate null space") {
    // two disconnected decay towers: both |0><0| blocks are stationary
    const Eigen::Index m = 3;
    Matrix bblock = destroy(m).data;
    Matrix a = Matrix::Zero(2 * m, 2 * m);
    a.topLeftCorner(m, m) = bblock;
    a.bottomRightCorner(m, m) = bblock;
    const Operator decay_two_towers({2, m}, a);
    const Operator H({2, m}, Matrix::Zero(2 * m, 2 * m));
    const Liouvillian L = build_liouvillian(H, {{decay_two_towers, two_pi * 1e6}});
    REQUIRE_THROWS_AS(steadystate_direct(L), SingularSystemError);
}

TEST_CASE("time average of a static model equals the direct steady state") {
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    const LindbladModel model = effective_model(p);
    const Liouvillian L = build_liouvillian(model.hamiltonian.static_part, model.c_ops);
    const DensityMatrix rho_ss = steadystate_direct(L);

    const CompositeOps ops(p.fock_dim);
    TimeAvgOptions opts;
    opts.transient = 18.0 / p.kappa;
    opts.window = 1.0 / p.kappa;
    opts.samples_per_window = 64;
    opts.evolve.integrator.rtol = 1e-9;
    opts.evolve.integrator.atol = 1e-13;
    const TimeAvgResult avg = steadystate_timeavg(
        model, projector(basis_state({2, p.fock_dim}, {0, 0})), {{"n_mean", ops.n}}, opts);

    REQUIRE((avg.rho_avg.data - rho_ss.data).cwiseAbs().maxCoeff() < 1e-6);
    REQUIRE(avg.mean_of("n_mean") == Approx(real_expect(ops.n, rho_ss)).margin(1e-6));
    REQUIRE(std::abs(avg.rho_avg.trace_real() - 1.0) < 1e-8);
    REQUIRE(avg.rho_avg.min_eigenvalue() > -1e-8);
    REQUIRE(avg.rho_avg.hermiticity_defect() < 1e-10);
}

TEST_CASE("time average flags non-convergence inside a short budget") {
    // slow settle: kappa tiny, transient deliberately too short, 2-window cap
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    const LindbladModel model = effective_model(p);
    const CompositeOps ops(p.fock_dim);
    TimeAvgOptions opts;
    opts.transient = 0.02 / p.kappa;
    opts.window = 0.05 / p.kappa;
    opts.samples_per_window = 16;
    opts.max_windows = 2;
    opts.evolve.integrator.rtol = 1e-7;
    const DensityMatrix far_start = projector(basis_state({2, p.fock_dim}, {0, 3}));
    REQUIRE_THROWS_AS(steadystate_timeavg(model, far_start, {{"n_mean", ops.n}}, opts),
                      ConvergenceError);
}

TEST_CASE("liouvillian gap is positive at the baseline operating point") {
    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);
    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    const SpectralGap gap = liouvillian_gap(L);
    REQUIRE(gap.null_multiplicity == 1);
    REQUIRE(gap.gap > 0.0);
}
