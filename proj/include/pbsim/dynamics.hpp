#ifndef PBSIM_DYNAMICS_HPP
#define PBSIM_DYNAMICS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "integrator.hpp"
#include "liouvillian.hpp"
#include "model.hpp"
#include "operators.hpp"
#include "types.hpp"

namespace pbsim {

struct EvolveOptions {
    IntegratorOptions integrator;
    bool interaction_picture = false;
};

// Time series of named observables, plus optional stored states at the sample
// times.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // values[k][i] = observable i at time k
    double norm_drift = 0.0;                  // |norm(end) - norm(start)| (Schrodinger)
    double trace_drift = 0.0;                 // |tr(end) - tr(start)|      (master equation)
    IntegratorStats stats;

    std::vector<double> column(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                std::vector<double> out;
                out.reserve(values.size());
                for (const auto& row : values) out.push_back(row[i]);
                return out;
            }
        }
        throw InvalidParameterError("Trajectory: no observable named " + name);
    }
};

using NamedOps = std::vector<std::pair<std::string, Operator>>;

namespace detail {

// Band-diagonal view of an operator: the matrix as a short list of nonzero
// diagonals. Every operator in this model (ladder, Pauli, number, drive) has
// one to five diagonals, so left/right multiplication against a dense matrix
// reduces to contiguous scaled-vector updates.
class BandedOp {
public:
    BandedOp() = default;

    explicit BandedOp(const Matrix& a) : n_(a.rows()) {
        for (Eigen::Index o = -(n_ - 1); o <= n_ - 1; ++o) {
            const Eigen::Index lo = std::max<Eigen::Index>(0, -o);
            const Eigen::Index hi = n_ - 1 - std::max<Eigen::Index>(0, o);
            Eigen::Index first = -1, last = -2;
            for (Eigen::Index i = lo; i <= hi; ++i) {
                if (a(i, i + o) != Complex(0.0, 0.0)) {
                    if (first < 0) first = i;
                    last = i;
                }
            }
            if (first < 0) continue;
            Diag d;
            d.offset = o;
            d.i0 = first;
            d.coeff = Vector(last - first + 1);
            for (Eigen::Index i = first; i <= last; ++i) d.coeff(i - first) = a(i, i + o);
            diags_.push_back(std::move(d));
        }
        scale_buf_.resize(n_);
    }

    // out += s * A * S, both column-major n x n buffers
    void mul_left_add(Complex s, const Complex* S, Complex* out) const {
        const Eigen::Index n = n_;
        for (const auto& d : diags_) {
            const Eigen::Index len = d.coeff.size();
            for (Eigen::Index k = 0; k < len; ++k) scale_buf_(k) = s * d.coeff(k);
            const Complex* ts = scale_buf_.data();
            for (Eigen::Index c = 0; c < n; ++c) {
                const Complex* sp = S + c * n + d.i0 + d.offset;
                Complex* op = out + c * n + d.i0;
                for (Eigen::Index k = 0; k < len; ++k) op[k] += ts[k] * sp[k];
            }
        }
    }

    // out += s * S * A
    void mul_right_add(Complex s, const Complex* S, Complex* out) const {
        const Eigen::Index n = n_;
        for (const auto& d : diags_) {
            const Eigen::Index len = d.coeff.size();
            for (Eigen::Index k = 0; k < len; ++k) {
                const Eigen::Index j = d.i0 + k;
                const Complex f = s * d.coeff(k);
                const Complex* sp = S + j * n;
                Complex* op = out + (j + d.offset) * n;
                for (Eigen::Index r = 0; r < n; ++r) op[r] += f * sp[r];
            }
        }
    }

    bool empty() const { return diags_.empty(); }

private:
    struct Diag {
        Eigen::Index offset = 0;
        Eigen::Index i0 = 0;
        Vector coeff;
    };
    Eigen::Index n_ = 0;
    std::vector<Diag> diags_;
    mutable Vector scale_buf_;
};

inline double fastest_frequency_estimate(const TimeDependentHamiltonian& h) {
    double span = h.static_part.data.diagonal().real().maxCoeff() -
                  h.static_part.data.diagonal().real().minCoeff();
    for (const auto& d : h.drives) span = std::max(span, std::abs(d.freq));
    return span;
}

// Rotating-drive Schrodinger right-hand side, optionally in the interaction
// picture with respect to the diagonal of the static Hamiltonian. A constant
// diagonal shift (phase centering) halves the fastest phase without changing
// any physics.
class SchrodingerRhs {
public:
    SchrodingerRhs(const TimeDependentHamiltonian& h, bool interaction_picture)
        : ip_(interaction_picture) {
        const Eigen::Index n = h.static_part.size();
        Eigen::VectorXd diag = h.static_part.data.diagonal().real();
        const double center = 0.5 * (diag.maxCoeff() + diag.minCoeff());
        Matrix hs = h.static_part.data;
        hs.diagonal().array() -= Complex(center, 0.0);
        if (ip_) {
            energies_ = hs.diagonal().real();
            hs.diagonal().setZero();
        }
        h0_ = Matrix(hs).sparseView();
        for (const auto& d : h.drives) {
            drive_ops_.push_back(Matrix(d.op.data).sparseView());
            drive_dag_ops_.push_back(Matrix(d.op.data.adjoint()).sparseView());
            freqs_.push_back(d.freq);
        }
        scratch_.resize(n);
        phases_.resize(n);
    }

    void operator()(double t, const Vector& y, Vector& out) {
        const Vector* src = &y;
        if (ip_) {
            for (Eigen::Index i = 0; i < y.size(); ++i)
                phases_(i) = std::exp(Complex(0.0, -energies_(i) * t));
            scratch_ = phases_.cwiseProduct(y);  // back to the lab frame
            src = &scratch_;
        }
        out.noalias() = h0_ * (*src);
        for (std::size_t k = 0; k < drive_ops_.size(); ++k) {
            const Complex ph = std::exp(Complex(0.0, -freqs_[k] * t));
            out.noalias() += ph * (drive_ops_[k] * (*src));
            out.noalias() += std::conj(ph) * (drive_dag_ops_[k] * (*src));
        }
        if (ip_) {
            for (Eigen::Index i = 0; i < y.size(); ++i)
                out(i) = Complex(0.0, -1.0) * std::conj(phases_(i)) * out(i);
        } else {
            out *= Complex(0.0, -1.0);
        }
    }

    // Maps an interaction-picture state back to the integration frame.
    Vector to_lab(double t, const Vector& y) const {
        if (!ip_) return y;
        Vector out(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i)
            out(i) = std::exp(Complex(0.0, -energies_(i) * t)) * y(i);
        return out;
    }

    Vector from_lab(double t, const Vector& y) const {
        if (!ip_) return y;
        Vector out(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i)
            out(i) = std::exp(Complex(0.0, energies_(i) * t)) * y(i);
        return out;
    }

private:
    bool ip_;
    SparseMatrix h0_;
    std::vector<SparseMatrix> drive_ops_, drive_dag_ops_;
    std::vector<double> freqs_;
    Eigen::VectorXd energies_;
    Vector scratch_, phases_;
};

// Lindblad right-hand side computed directly on the n x n matrix layout: the
// column-stacked state vector is viewed in place as a matrix, and every term
// is a small sparse-times-dense product. This is deliberately a different
// evaluation route from the explicit superoperator in liouvillian.hpp. The
// interaction picture removes the commutator with the diagonal of the static
// Hamiltonian; its vec-index phase exp(-i(E_r - E_c)t) is assembled from n
// row phases.
class MasterRhs {
public:
    MasterRhs(const LindbladModel& m, bool interaction_picture) : ip_(interaction_picture) {
        const Eigen::Index n = m.hamiltonian.static_part.size();
        n_ = n;
        Matrix hs = m.hamiltonian.static_part.data;
        if (ip_) {
            energies_ = hs.diagonal().real();
            hs.diagonal().setZero();
        }
        h_static_ = BandedOp(hs);
        for (const auto& c : m.c_ops) {
            if (c.rate < 0) throw InvalidParameterError("MasterRhs: negative collapse rate");
            if (c.rate == 0.0) continue;
            Channel ch;
            ch.rate = c.rate;
            ch.a = BandedOp(c.op.data);
            ch.adag = BandedOp(c.op.data.adjoint());
            ch.ada = BandedOp(c.op.data.adjoint() * c.op.data);
            channels_.push_back(std::move(ch));
        }
        for (const auto& d : m.hamiltonian.drives) {
            Drive dr;
            dr.freq = d.freq;
            dr.op = BandedOp(d.op.data);
            dr.opdag = BandedOp(d.op.data.adjoint());
            drives_.push_back(std::move(dr));
        }
        t1_.resize(n, n);
        src_mat_.resize(n, n);
        row_phase_.resize(ip_ ? n : 0);
    }

    void operator()(double t, const Vector& y, Vector& out) {
        const Eigen::Index n = n_;
        Eigen::Map<const Matrix> y_mat(y.data(), n, n);
        Eigen::Map<Matrix> o_mat(out.data(), n, n);
        if (ip_) {
            for (Eigen::Index j = 0; j < n; ++j)
                row_phase_(j) = std::exp(Complex(0.0, -energies_(j) * t));
            for (Eigen::Index c = 0; c < n; ++c) {
                const Complex cc = std::conj(row_phase_(c));
                for (Eigen::Index r = 0; r < n; ++r) src_mat_(r, c) = row_phase_(r) * cc * y_mat(r, c);
            }
            apply_generator(t, src_mat_.data(), out.data());
            for (Eigen::Index c = 0; c < n; ++c) {
                const Complex cc = row_phase_(c);
                for (Eigen::Index r = 0; r < n; ++r)
                    o_mat(r, c) = std::conj(row_phase_(r)) * cc * o_mat(r, c);
            }
        } else {
            apply_generator(t, y.data(), out.data());
        }
    }

    Vector to_lab(double t, const Vector& y) const {
        if (!ip_) return y;
        Vector out(y.size());
        Eigen::Index idx = 0;
        for (Eigen::Index c = 0; c < n_; ++c)
            for (Eigen::Index r = 0; r < n_; ++r, ++idx)
                out(idx) = std::exp(Complex(0.0, -(energies_(r) - energies_(c)) * t)) * y(idx);
        return out;
    }

    Vector from_lab(double t, const Vector& y) const {
        if (!ip_) return y;
        Vector out(y.size());
        Eigen::Index idx = 0;
        for (Eigen::Index c = 0; c < n_; ++c)
            for (Eigen::Index r = 0; r < n_; ++r, ++idx)
                out(idx) = std::exp(Complex(0.0, (energies_(r) - energies_(c)) * t)) * y(idx);
        return out;
    }

    Eigen::Index hilbert_dim() const { return n_; }

private:
    struct Channel {
        double rate = 0.0;
        BandedOp a, adag, ada;
    };
    struct Drive {
        double freq = 0.0;
        BandedOp op, opdag;
    };

    static constexpr Complex mi{0.0, -1.0};  // -i

    void apply_generator(double t, const Complex* S, Complex* out) {
        std::fill(out, out + n_ * n_, Complex(0.0, 0.0));
        h_static_.mul_left_add(mi, S, out);
        h_static_.mul_right_add(-mi, S, out);
        for (const auto& ch : channels_) {
            t1_.setZero();
            ch.a.mul_left_add(1.0, S, t1_.data());
            ch.adag.mul_right_add(ch.rate, t1_.data(), out);
            ch.ada.mul_left_add(-0.5 * ch.rate, S, out);
            ch.ada.mul_right_add(-0.5 * ch.rate, S, out);
        }
        for (const auto& d : drives_) {
            const Complex ph = std::exp(Complex(0.0, -d.freq * t));
            d.op.mul_left_add(mi * ph, S, out);
            d.op.mul_right_add(-mi * ph, S, out);
            d.opdag.mul_left_add(mi * std::conj(ph), S, out);
            d.opdag.mul_right_add(-mi * std::conj(ph), S, out);
        }
    }

    bool ip_;
    Eigen::Index n_ = 0;
    BandedOp h_static_;
    std::vector<Channel> channels_;
    std::vector<Drive> drives_;
    Eigen::VectorXd energies_;
    Matrix t1_, src_mat_;
    Vector row_phase_;
};

inline void check_hermitian_hamiltonian(const TimeDependentHamiltonian& h) {
    const Operator probe = h.at(0.123456789e-9);
    const double scale = std::max(1.0, probe.data.cwiseAbs().maxCoeff());
    if ((probe.data - probe.data.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw InvalidParameterError("Hamiltonian is not Hermitian");
}

}  // namespace detail

// Integrates i d|psi>/dt = H(t)|psi>, recording the requested observables at
// the given times.
inline Trajectory schrodinger_evolve(const TimeDependentHamiltonian& h, const StateVector& psi0,
                                     const std::vector<double>& times, const NamedOps& observables,
                                     const EvolveOptions& opts = {}, StateVector* final_state = nullptr) {
    if (times.empty()) throw InvalidParameterError("schrodinger_evolve: empty time grid");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw InvalidParameterError("schrodinger_evolve: initial state is not normalized");
    detail::check_hermitian_hamiltonian(h);

    detail::SchrodingerRhs rhs(h, opts.interaction_picture);
    Trajectory traj;
    traj.names.reserve(observables.size());
    for (const auto& [name, op] : observables) {
        if (op.dims != psi0.dims) throw DimensionError("schrodinger_evolve: observable dims mismatch");
        traj.names.push_back(name);
    }

    Vector y = rhs.from_lab(times.front(), psi0.amplitudes);
    const double norm0 = y.norm();
    auto record = [&](double t, const Vector& v) {
        const Vector lab = rhs.to_lab(t, v);
        traj.times.push_back(t);
        std::vector<double> row;
        row.reserve(observables.size());
        for (const auto& [name, op] : observables)
            row.push_back(lab.dot(op.data * lab).real());
        traj.values.push_back(std::move(row));
    };

    DormandPrince54 stepper([&rhs](double t, const Vector& v, Vector& out) { rhs(t, v, out); });
    try {
        traj.stats = stepper.integrate(times.front(), times.back(), y, opts.integrator, times, record);
    } catch (const StiffnessError& e) {
        throw StiffnessError(std::string(e.what()) + "; fastest frequency in H is about " +
                             std::to_string(detail::fastest_frequency_estimate(h)) + " rad/s");
    }
    traj.norm_drift = std::abs(y.norm() - norm0);
    if (final_state) *final_state = StateVector(psi0.dims, rhs.to_lab(times.back(), y));
    return traj;
}

// Integrates the Lindblad master equation, recording observables of rho(t).
inline Trajectory mesolve(const LindbladModel& model, const DensityMatrix& rho0,
                          const std::vector<double>& times, const NamedOps& observables,
                          const EvolveOptions& opts = {}, DensityMatrix* final_state = nullptr) {
    if (times.empty()) throw InvalidParameterError("mesolve: empty time grid");
    detail::check_hermitian_hamiltonian(model.hamiltonian);
    for (const auto& c : model.c_ops)
        if (c.rate < 0) throw InvalidParameterError("mesolve: negative collapse rate");

    const Eigen::Index n = rho0.size();
    detail::MasterRhs rhs(model, opts.interaction_picture);
    Trajectory traj;
    for (const auto& [name, op] : observables) {
        if (op.dims != rho0.dims) throw DimensionError("mesolve: observable dims mismatch");
        traj.names.push_back(name);
    }

    Vector y = rhs.from_lab(times.front(), vec(rho0.data));
    const double tr0 = unvec(rhs.to_lab(times.front(), y), n).trace().real();
    auto record = [&](double t, const Vector& v) {
        Matrix rho = unvec(rhs.to_lab(t, v), n);
        rho = 0.5 * (rho + rho.adjoint().eval());
        traj.times.push_back(t);
        std::vector<double> row;
        row.reserve(observables.size());
        for (const auto& [name, op] : observables)
            row.push_back((op.data * rho).trace().real());
        traj.values.push_back(std::move(row));
    };

    DormandPrince54 stepper([&rhs](double t, const Vector& v, Vector& out) { rhs(t, v, out); });
    try {
        traj.stats = stepper.integrate(times.front(), times.back(), y, opts.integrator, times, record);
    } catch (const StiffnessError& e) {
        throw StiffnessError(std::string(e.what()) + "; fastest frequency in H is about " +
                             std::to_string(detail::fastest_frequency_estimate(model.hamiltonian)) +
                             " rad/s");
    }
    Matrix rho_end = unvec(rhs.to_lab(times.back(), y), n);
    traj.trace_drift = std::abs(rho_end.trace().real() - tr0);
    if (final_state) {
        rho_end = 0.5 * (rho_end + rho_end.adjoint().eval());
        *final_state = DensityMatrix(rho0.dims, std::move(rho_end));
    }
    return traj;
}

// Evolves an arbitrary matrix X (not necessarily a state) under the same
// Lindblad generator from t0 to t0+tau; the map is linear in X. Optional
// samples observe Tr[A X(t)] for a single fixed A at the given offsets.
inline Operator propagate_operator(const LindbladModel& model, const Operator& x, double t0, double tau,
                                   const EvolveOptions& opts = {},
                                   const std::vector<double>& sample_offsets = {},
                                   const Operator* sample_op = nullptr,
                                   std::vector<Complex>* sample_values = nullptr) {
    detail::check_hermitian_hamiltonian(model.hamiltonian);
    const Eigen::Index n = x.size();
    detail::MasterRhs rhs(model, opts.interaction_picture);
    Vector y = rhs.from_lab(t0, vec(x.data));

    std::vector<double> sample_times;
    sample_times.reserve(sample_offsets.size());
    for (double s : sample_offsets) sample_times.push_back(t0 + s);
    auto record = [&](double t, const Vector& v) {
        if (!sample_op || !sample_values) return;
        Matrix xt = unvec(rhs.to_lab(t, v), n);
        sample_values->push_back((sample_op->data * xt).trace());
    };

    DormandPrince54 stepper([&rhs](double t, const Vector& v, Vector& out) { rhs(t, v, out); });
    stepper.integrate(t0, t0 + tau, y, opts.integrator, sample_times,
                      (sample_op && sample_values) ? SampleCallback(record) : SampleCallback());
    return Operator(x.dims, unvec(rhs.to_lab(t0 + tau, y), n));
}

}  // namespace pbsim

#endif
