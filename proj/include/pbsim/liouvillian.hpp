#ifndef PBSIM_LIOUVILLIAN_HPP
#define PBSIM_LIOUVILLIAN_HPP

#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "model.hpp"
#include "types.hpp"

namespace pbsim {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Column-stacking vectorization: vec index of element (r, c) is c*n + r, so
// vec(A rho B) = (B^T kron A) vec(rho).
inline Vector vec(const Matrix& rho) {
    Vector v(rho.size());
    Eigen::Index k = 0;
    for (Eigen::Index c = 0; c < rho.cols(); ++c)
        for (Eigen::Index r = 0; r < rho.rows(); ++r) v(k++) = rho(r, c);
    return v;
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
    Matrix rho(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) rho(r, c) = v(k++);
    return rho;
}

namespace detail {

inline void append_spre(std::vector<Triplet>& trips, const Matrix& a, Complex scale) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex v = scale * a(i, j);
            if (v == Complex(0.0, 0.0)) continue;
            for (Eigen::Index c = 0; c < n; ++c) trips.emplace_back(c * n + i, c * n + j, v);
        }
}

inline void append_spost(std::vector<Triplet>& trips, const Matrix& b, Complex scale) {
    const Eigen::Index n = b.rows();
    for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index c = 0; c < n; ++c) {
            const Complex v = scale * b(s, c);
            if (v == Complex(0.0, 0.0)) continue;
            for (Eigen::Index r = 0; r < n; ++r) trips.emplace_back(c * n + r, s * n + r, v);
        }
}

// vec(A rho A^dag) = (conj(A) kron A) vec(rho)
inline void append_sandwich(std::vector<Triplet>& trips, const Matrix& a, Complex scale) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (a(i, j) == Complex(0.0, 0.0)) continue;
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l) {
                    const Complex v = scale * std::conj(a(i, j)) * a(k, l);
                    if (v == Complex(0.0, 0.0)) continue;
                    trips.emplace_back(i * n + k, j * n + l, v);
                }
        }
}

}  // namespace detail

inline SparseMatrix spre(const Matrix& a) {
    std::vector<Triplet> t;
    detail::append_spre(t, a, 1.0);
    SparseMatrix m(a.rows() * a.rows(), a.rows() * a.rows());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

inline SparseMatrix spost(const Matrix& a) {
    std::vector<Triplet> t;
    detail::append_spost(t, a, 1.0);
    SparseMatrix m(a.rows() * a.rows(), a.rows() * a.rows());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Commutator superoperator -i [A, .]
inline SparseMatrix commutator_super(const Matrix& a) {
    std::vector<Triplet> t;
    detail::append_spre(t, a, Complex(0.0, -1.0));
    detail::append_spost(t, a, Complex(0.0, 1.0));
    SparseMatrix m(a.rows() * a.rows(), a.rows() * a.rows());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// D[A, rate] rho = rate/2 (2 A rho A' - A'A rho - rho A'A) as a superoperator.
inline SparseMatrix dissipator_super(const Matrix& a, double rate) {
    if (rate < 0) throw InvalidParameterError("dissipator_super: negative rate");
    std::vector<Triplet> t;
    detail::append_sandwich(t, a, rate);
    const Matrix ada = a.adjoint() * a;
    detail::append_spre(t, ada, -0.5 * rate);
    detail::append_spost(t, ada, -0.5 * rate);
    SparseMatrix m(a.rows() * a.rows(), a.rows() * a.rows());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Matrix form of the Lindblad generator acting on column-vectorized density
// matrices.
struct Liouvillian {
    std::vector<Eigen::Index> dims;
    SparseMatrix generator;

    Eigen::Index hilbert_dim() const { return dims_product(dims); }

    Matrix dense() const { return Matrix(generator); }

    // || vec(I)^dag L || / ||L||_F ; zero for any trace-preserving generator.
    double trace_preservation_defect() const {
        const Eigen::Index n = hilbert_dim();
        Vector tr = Vector::Zero(n * n);
        for (Eigen::Index i = 0; i < n; ++i) tr(i * n + i) = 1.0;
        const Vector left = generator.adjoint() * tr;
        return left.norm() / generator.norm();
    }
};

inline Liouvillian build_liouvillian(const Operator& h, const std::vector<CollapseOp>& c_ops,
                                     double herm_tol = 1e-9) {
    const double scale = std::max(1.0, h.data.cwiseAbs().maxCoeff());
    if ((h.data - h.data.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale)
        throw InvalidParameterError("build_liouvillian: Hamiltonian is not Hermitian");
    const Eigen::Index n = h.size();
    std::vector<Triplet> t;
    detail::append_spre(t, h.data, Complex(0.0, -1.0));
    detail::append_spost(t, h.data, Complex(0.0, 1.0));
    for (const auto& c : c_ops) {
        if (c.rate < 0) throw InvalidParameterError("build_liouvillian: negative rate");
        if (c.rate == 0.0) continue;
        if (c.op.dims != h.dims) throw DimensionError("build_liouvillian: collapse operator dims mismatch");
        detail::append_sandwich(t, c.op.data, c.rate);
        const Matrix ada = c.op.data.adjoint() * c.op.data;
        detail::append_spre(t, ada, -0.5 * c.rate);
        detail::append_spost(t, ada, -0.5 * c.rate);
    }
    Liouvillian L;
    L.dims = h.dims;
    L.generator.resize(n * n, n * n);
    L.generator.setFromTriplets(t.begin(), t.end());
    return L;
}

// Right-hand side of the master equation applied directly to a density matrix,
// used as the independent route for the superoperator action check.
inline Matrix lindblad_rhs_direct(const Operator& h, const std::vector<CollapseOp>& c_ops,
                                  const Matrix& rho) {
    Matrix out = Complex(0.0, -1.0) * (h.data * rho - rho * h.data);
    for (const auto& c : c_ops) {
        if (c.rate == 0.0) continue;
        const Matrix& a = c.op.data;
        const Matrix ada = a.adjoint() * a;
        out += 0.5 * c.rate * (2.0 * a * rho * a.adjoint() - ada * rho - rho * ada);
    }
    return out;
}

struct SpectralGap {
    double gap = 0.0;            // -max Re over eigenvalues away from zero
    int null_multiplicity = 0;   // eigenvalues with |lambda| below tolerance
};

// Full spectrum of the generator; intended for modest Hilbert dimensions.
inline SpectralGap liouvillian_gap(const Liouvillian& L, double zero_tol = 1e-7) {
    Eigen::ComplexEigenSolver<Matrix> es(L.dense(), false);
    const auto& ev = es.eigenvalues();
    double scale = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
    SpectralGap out;
    double second = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < zero_tol * std::max(scale, 1.0)) {
            ++out.null_multiplicity;
        } else {
            second = std::max(second, ev(i).real());
        }
    }
    out.gap = -second;
    return out;
}

}  // namespace pbsim

#endif
