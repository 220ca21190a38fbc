#ifndef PBSIM_MODEL_HPP
#define PBSIM_MODEL_HPP

#include <cmath>
#include <vector>

#include "operators.hpp"
#include "params.hpp"
#include "types.hpp"

namespace pbsim {

// One rotating drive term: op * exp(-i freq t) + h.c.
struct DriveTerm {
    Operator op;
    double freq = 0.0;
};

// H(t) = static_part + sum_k [ drives[k].op e^{-i w_k t} + h.c. ].
struct TimeDependentHamiltonian {
    Operator static_part;
    std::vector<DriveTerm> drives;

    bool is_static() const { return drives.empty(); }

    Operator at(double t) const {
        Matrix h = static_part.data;
        for (const auto& d : drives) {
            const Complex phase = std::exp(Complex(0.0, -d.freq * t));
            h += phase * d.op.data + std::conj(phase) * d.op.data.adjoint();
        }
        return Operator(static_part.dims, std::move(h));
    }
};

struct CollapseOp {
    Operator op;
    double rate = 0.0;
};

struct LindbladModel {
    TimeDependentHamiltonian hamiltonian;
    std::vector<CollapseOp> c_ops;
};

// Composite-space operators for the fixed qubit (x) resonator ordering.
struct CompositeOps {
    Operator b, bdag, n, sz, sx, sp, sm, excited, id;

    explicit CompositeOps(Eigen::Index fock_dim) {
        const Operator id_q = identity({2});
        const Operator id_f = identity({fock_dim});
        const Operator b1 = destroy(fock_dim);
        b = tensor(id_q, b1);
        bdag = b.adjoint();
        n = Operator(b.dims, bdag.data * b.data);
        sz = tensor(pauli(Pauli::z), id_f);
        sx = tensor(pauli(Pauli::x), id_f);
        sp = tensor(pauli(Pauli::plus), id_f);
        sm = tensor(pauli(Pauli::minus), id_f);
        Matrix pe = Matrix::Zero(2, 2);
        pe(1, 1) = 1.0;
        excited = tensor(Operator({2}, std::move(pe)), id_f);
        id = identity({2, fock_dim});
    }
};

// Lab-frame Hamiltonian in the qubit-drive rotating frame:
// H(t) = Delta/2 sz + w0 n + g sz (b+b') + Omega_p sx + eps (b' e^{-i wf t} + h.c.),
// with wf = omega0' - Delta_d.
inline TimeDependentHamiltonian lab_hamiltonian(const SystemParams& p) {
    p.check();
    const CompositeOps ops(p.fock_dim);
    Matrix h = 0.5 * p.delta * ops.sz.data + p.omega0 * ops.n.data +
               p.g * (ops.sz.data * (ops.b.data + ops.bdag.data)) + p.omega_p_drive * ops.sx.data;
    TimeDependentHamiltonian H;
    H.static_part = Operator(ops.b.dims, std::move(h));
    if (p.epsilon != 0.0) {
        H.drives.push_back({Operator(ops.b.dims, p.epsilon * ops.bdag.data), drive_frequency(p)});
    }
    return H;
}

// Static effective Hamiltonian in the frame co-rotating with the resonator
// drive at wf and with the dressed qubit splitting at 2 wf:
// H' = Delta_d n + (delta_tilde - omega0' + Delta_d) sz
//      + lambda (b^2 s+ + b'^2 s-) + eps (b + b').
// The qubit basis here is the dressed one; at the resonant operating point
// delta_tilde = omega0' the sz coefficient reduces to Delta_d.
inline Operator effective_hamiltonian(const SystemParams& p) {
    p.check();
    const DerivedParams dp = derive(p);
    const CompositeOps ops(p.fock_dim);
    const Matrix b2 = ops.b.data * ops.b.data;
    const double sz_coeff = dp.delta_tilde - dp.omega0_prime + p.delta_d;
    Matrix h = p.delta_d * ops.n.data + sz_coeff * ops.sz.data +
               dp.lambda_eff * (ops.sp.data * b2 + ops.sm.data * b2.adjoint()) +
               p.epsilon * (ops.b.data + ops.bdag.data);
    return Operator(ops.b.dims, std::move(h));
}

// Effective Hamiltonian with the decay channels folded in as anti-Hermitian
// damping: H' - i kappa/2 n - i Gamma/2 |e><e|.
inline Operator nonhermitian_hamiltonian(const SystemParams& p) {
    const Operator h = effective_hamiltonian(p);
    const CompositeOps ops(p.fock_dim);
    Matrix m = h.data - Complex(0.0, 0.5 * p.kappa) * ops.n.data -
               Complex(0.0, 0.5 * p.gamma) * ops.excited.data;
    return Operator(h.dims, std::move(m));
}

// Decay channels: qubit decay, pure dephasing, thermal absorption/emission.
inline std::vector<CollapseOp> collapse_operators(const SystemParams& p) {
    p.check();
    const CompositeOps ops(p.fock_dim);
    return {
        {ops.sm, p.gamma},
        {ops.sz, 0.5 * p.gamma_phi},
        {ops.bdag, p.kappa * p.n_th},
        {ops.b, p.kappa * (p.n_th + 1.0)},
    };
}

inline LindbladModel lab_model(const SystemParams& p) {
    return {lab_hamiltonian(p), collapse_operators(p)};
}

inline LindbladModel effective_model(const SystemParams& p) {
    return {{effective_hamiltonian(p), {}}, collapse_operators(p)};
}

}  // namespace pbsim

#endif
