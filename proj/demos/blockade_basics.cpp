// Minimal tour: build the effective model at the baseline operating point,
// solve for the steady state, and print the blockade figures of merit.

#include <iostream>

#include <pbsim/pbsim.hpp>

int main() {
    using namespace pbsim;

    SystemParams p = baseline_params();
    p.delta = resonant_delta(p);

    const DerivedParams d = derive(p);
    std::cout << "lambda/2pi = " << d.lambda_eff / two_pi / 1e6 << " MHz, beta = " << d.beta
              << ", theta = " << d.theta << "\n";

    const Liouvillian L = build_liouvillian(effective_hamiltonian(p), collapse_operators(p));
    const DensityMatrix rho = steadystate_direct(L);
    const CompositeOps ops(p.fock_dim);

    std::cout << "steady state: <n> = " << real_expect(ops.n, rho) << ", g2(0) = " << g2_zero(rho)
              << ", F = " << truncation_fidelity(rho) << "\n";

    const double g2_cf = g2_analytic(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    const OracleResult oracle = four_state_oracle(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    std::cout << "four-state theory: closed form g2 = " << g2_cf << ", oracle g2 = " << oracle.g2
              << "\n";

    const auto cond = blockade_condition(p.epsilon, p.kappa, p.gamma, d.lambda_eff);
    std::cout << "blockade ratio = " << cond.ratio << (cond.strong ? " (strong)" : " (weak)") << "\n";
    return 0;
}
