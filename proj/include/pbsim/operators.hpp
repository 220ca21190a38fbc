#ifndef PBSIM_OPERATORS_HPP
#define PBSIM_OPERATORS_HPP

#include <cmath>
#include <initializer_list>

#include "types.hpp"

namespace pbsim {

// Bosonic annihilation operator on a Fock space truncated at fock_dim levels:
// b[n-1, n] = sqrt(n).
inline Operator destroy(Eigen::Index fock_dim) {
    if (fock_dim < 2)
        throw InvalidParameterError("destroy: fock_dim must be >= 2, got " + std::to_string(fock_dim));
    Matrix m = Matrix::Zero(fock_dim, fock_dim);
    for (Eigen::Index n = 1; n < fock_dim; ++n) m(n - 1, n) = std::sqrt(double(n));
    return Operator({fock_dim}, std::move(m));
}

inline Operator create(Eigen::Index fock_dim) { return destroy(fock_dim).adjoint(); }

inline Operator number(Eigen::Index fock_dim) {
    Operator b = destroy(fock_dim);
    return Operator({fock_dim}, b.data.adjoint() * b.data);
}

inline Operator identity(std::vector<Eigen::Index> dims) {
    const Eigen::Index n = dims_product(dims);
    return Operator(std::move(dims), Matrix::Identity(n, n));
}

enum class Pauli { z, x, plus, minus };

// 2x2 qubit operators in the fixed basis ordering |g> = 0, |e> = 1, so that
// sigma_z = |e><e| - |g><g| = diag(-1, +1).
inline Operator pauli(Pauli which) {
    Matrix m = Matrix::Zero(2, 2);
    switch (which) {
        case Pauli::z:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case Pauli::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Pauli::plus:
            m(1, 0) = 1.0;  // |e><g|
            break;
        case Pauli::minus:
            m(0, 1) = 1.0;  // |g><e|
            break;
    }
    return Operator({2}, std::move(m));
}

inline Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Tensor product in the declared subsystem order; dims concatenate.
inline Operator tensor(const std::vector<Operator>& ops) {
    if (ops.empty()) throw InvalidParameterError("tensor: empty operator list");
    Matrix acc = ops.front().data;
    std::vector<Eigen::Index> dims = ops.front().dims;
    for (std::size_t k = 1; k < ops.size(); ++k) {
        acc = kronecker(acc, ops[k].data);
        dims.insert(dims.end(), ops[k].dims.begin(), ops[k].dims.end());
    }
    return Operator(std::move(dims), std::move(acc));
}

inline Operator tensor(const Operator& a, const Operator& b) { return tensor(std::vector<Operator>{a, b}); }

// Tr[A rho]. The imaginary part is the caller's residue to inspect; for
// Hermitian A on a valid state it stays below ~1e-9.
inline Complex expect(const Operator& a, const DensityMatrix& rho) {
    if (a.dims != rho.dims)
        throw DimensionError("expect: operator dims " + dims_to_string(a.dims) + " vs state dims " +
                             dims_to_string(rho.dims));
    return (a.data * rho.data).trace();
}

inline Complex expect(const Operator& a, const StateVector& psi) {
    if (a.dims != psi.dims) throw DimensionError("expect: dims mismatch");
    return psi.amplitudes.dot(a.data * psi.amplitudes);
}

// Real expectation of a (near-)Hermitian observable; throws if the imaginary
// residue is beyond tol.
template <typename State>
double real_expect(const Operator& a, const State& st, double tol = 1e-7) {
    const Complex v = expect(a, st);
    if (std::abs(v.imag()) > tol * std::max(1.0, std::abs(v.real())))
        throw InvalidParameterError("real_expect: imaginary residue " + std::to_string(v.imag()));
    return v.real();
}

// Product basis state |i0, i1, ...> for the given subsystem indices.
inline StateVector basis_state(std::vector<Eigen::Index> dims, const std::vector<Eigen::Index>& indices) {
    if (dims.size() != indices.size())
        throw DimensionError("basis_state: need one index per subsystem");
    Eigen::Index pos = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (indices[k] < 0 || indices[k] >= dims[k])
            throw InvalidParameterError("basis_state: index " + std::to_string(indices[k]) +
                                        " out of range for dimension " + std::to_string(dims[k]));
        pos = pos * dims[k] + indices[k];
    }
    const Eigen::Index n = dims_product(dims);
    Vector v = Vector::Zero(n);
    v(pos) = 1.0;
    return StateVector(std::move(dims), std::move(v));
}

inline DensityMatrix projector(const StateVector& psi) {
    return DensityMatrix(psi.dims, psi.amplitudes * psi.amplitudes.adjoint());
}

inline Operator projector_op(const StateVector& psi) {
    return Operator(psi.dims, psi.amplitudes * psi.amplitudes.adjoint());
}

// Projector onto the resonator Fock state |n>, tensored with the qubit identity.
inline Operator fock_projector(Eigen::Index n, Eigen::Index fock_dim) {
    if (n < 0 || n >= fock_dim)
        throw InvalidParameterError("fock_projector: n = " + std::to_string(n) + " outside [0, " +
                                    std::to_string(fock_dim) + ")");
    Matrix p = Matrix::Zero(fock_dim, fock_dim);
    p(n, n) = 1.0;
    return tensor(identity({2}), Operator({fock_dim}, std::move(p)));
}

// Single-mode thermal state with mean occupation n_th, normalized on the
// truncated space.
inline DensityMatrix thermal_state(Eigen::Index fock_dim, double n_th) {
    if (n_th < 0) throw InvalidParameterError("thermal_state: n_th < 0");
    Vector p = Vector::Zero(fock_dim);
    if (n_th == 0.0) {
        p(0) = 1.0;
    } else {
        const double r = n_th / (n_th + 1.0);
        double w = 1.0;
        for (Eigen::Index n = 0; n < fock_dim; ++n, w *= r) p(n) = w;
        p /= p.sum();
    }
    return DensityMatrix({fock_dim}, Matrix(p.asDiagonal()));
}

// Single-mode coherent state |alpha> from the truncated exponential series.
inline StateVector coherent_state(Eigen::Index fock_dim, Complex alpha) {
    Vector v(fock_dim);
    Complex amp = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index n = 0; n < fock_dim; ++n) {
        v(n) = amp;
        amp *= alpha / std::sqrt(double(n + 1));
    }
    v /= v.norm();
    return StateVector({fock_dim}, std::move(v));
}

}  // namespace pbsim

#endif
