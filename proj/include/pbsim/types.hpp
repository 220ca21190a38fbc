#ifndef PBSIM_TYPES_HPP
#define PBSIM_TYPES_HPP

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pbsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class InvalidParameterError : public Error {
public:
    explicit InvalidParameterError(const std::string& msg) : Error(msg) {}
};

class StiffnessError : public Error {
public:
    explicit StiffnessError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& msg) : Error(msg) {}
};

class UndefinedCorrelationError : public Error {
public:
    explicit UndefinedCorrelationError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

inline Eigen::Index dims_product(const std::vector<Eigen::Index>& dims) {
    Eigen::Index n = 1;
    for (auto d : dims) n *= d;
    return n;
}

inline std::string dims_to_string(const std::vector<Eigen::Index>& dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(dims[i]);
    }
    return s + "]";
}

// Square operator on a tensor-product Hilbert space. The subsystem ordering is
// fixed project-wide: qubit factor first (|g> = index 0, |e> = index 1), Fock
// factor second with ascending phonon number.
struct Operator {
    std::vector<Eigen::Index> dims;
    Matrix data;

    Operator() = default;
    Operator(std::vector<Eigen::Index> d, Matrix m) : dims(std::move(d)), data(std::move(m)) {
        const Eigen::Index n = dims_product(dims);
        if (data.rows() != n || data.cols() != n)
            throw DimensionError("Operator: matrix is " + std::to_string(data.rows()) + "x" +
                                 std::to_string(data.cols()) + " but dims " + dims_to_string(dims) +
                                 " require " + std::to_string(n));
    }

    Eigen::Index size() const { return data.rows(); }

    Operator adjoint() const { return Operator(dims, data.adjoint()); }

    bool is_hermitian(double tol = 1e-12) const {
        return (data - data.adjoint()).cwiseAbs().maxCoeff() < tol;
    }

    bool same_dims(const Operator& other) const { return dims == other.dims; }
};

inline Operator operator+(const Operator& a, const Operator& b) {
    if (a.dims != b.dims) throw DimensionError("operator+: dims mismatch");
    return Operator(a.dims, a.data + b.data);
}

inline Operator operator-(const Operator& a, const Operator& b) {
    if (a.dims != b.dims) throw DimensionError("operator-: dims mismatch");
    return Operator(a.dims, a.data - b.data);
}

inline Operator operator*(const Operator& a, const Operator& b) {
    if (a.dims != b.dims) throw DimensionError("operator*: dims mismatch");
    return Operator(a.dims, a.data * b.data);
}

inline Operator operator*(Complex c, const Operator& a) { return Operator(a.dims, c * a.data); }
inline Operator operator*(double c, const Operator& a) { return Operator(a.dims, c * a.data); }

// Pure state on the same composite space, norm 1 after construction.
struct StateVector {
    std::vector<Eigen::Index> dims;
    Vector amplitudes;

    StateVector() = default;
    StateVector(std::vector<Eigen::Index> d, Vector v) : dims(std::move(d)), amplitudes(std::move(v)) {
        if (amplitudes.size() != dims_product(dims))
            throw DimensionError("StateVector: length " + std::to_string(amplitudes.size()) +
                                 " does not match dims " + dims_to_string(dims));
    }

    double norm() const { return amplitudes.norm(); }
};

// Density matrix: trace 1, Hermitian, positive semidefinite (within numerical floors).
struct DensityMatrix {
    std::vector<Eigen::Index> dims;
    Matrix data;

    DensityMatrix() = default;
    DensityMatrix(std::vector<Eigen::Index> d, Matrix m) : dims(std::move(d)), data(std::move(m)) {
        const Eigen::Index n = dims_product(dims);
        if (data.rows() != n || data.cols() != n)
            throw DimensionError("DensityMatrix: matrix size does not match dims " + dims_to_string(dims));
    }

    Eigen::Index size() const { return data.rows(); }

    double trace_real() const { return data.trace().real(); }

    double hermiticity_defect() const { return (data - data.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (data + data.adjoint())), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Throws unless the state satisfies the standard invariants.
    void validate(double trace_tol = 1e-8, double herm_tol = 1e-10, double eig_floor = -1e-8) const {
        const double tr_err = std::abs(data.trace() - Complex(1.0, 0.0));
        if (tr_err > trace_tol)
            throw InvalidParameterError("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
        const double herm = hermiticity_defect();
        if (herm > herm_tol)
            throw InvalidParameterError("DensityMatrix: Hermiticity defect " + std::to_string(herm));
        const double mineig = min_eigenvalue();
        if (mineig < eig_floor)
            throw InvalidParameterError("DensityMatrix: min eigenvalue " + std::to_string(mineig));
    }
};

}  // namespace pbsim

#endif
