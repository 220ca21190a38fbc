#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <pbsim/operators.hpp>

using namespace pbsim;
using Catch::Approx;

TEST_CASE("destroy has ladder matrix elements") {
    const Operator b = destroy(3);
    REQUIRE(b.data(0, 1).real() == Approx(1.0));
    REQUIRE(b.data(1, 2).real() == Approx(std::sqrt(2.0)));
    double off_sum = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            if (!(j == i + 1)) off_sum += std::abs(b.data(i, j));
    REQUIRE(off_sum == 0.0);
}

TEST_CASE("destroy rejects too-small spaces") {
    REQUIRE_THROWS_AS(destroy(1), InvalidParameterError);
    REQUIRE_THROWS_AS(destroy(0), InvalidParameterError);
}

TEST_CASE("b maps |1> to |0>") {
    const Operator b = destroy(8);
    const StateVector one = basis_state({8}, {1});
    const Vector out = b.data * one.amplitudes;
    REQUIRE(std::abs(out(0) - Complex(1.0, 0.0)) < 1e-15);
    REQUIRE(out.tail(7).norm() < 1e-15);
}

TEST_CASE("number operator eigenvalue on |2>") {
    const StateVector two = basis_state({10}, {2});
    REQUIRE(real_expect(number(10), two) == Approx(2.0).margin(1e-12));
}

TEST_CASE("pauli conventions, |g> = 0 and |e> = 1") {
    const StateVector g = basis_state({2}, {0});
    const StateVector e = basis_state({2}, {1});
    REQUIRE(real_expect(pauli(Pauli::z), e) == Approx(1.0));
    REQUIRE(real_expect(pauli(Pauli::z), g) == Approx(-1.0));
    const Vector raised = pauli(Pauli::plus).data * g.amplitudes;
    REQUIRE(std::abs(raised(1) - Complex(1.0, 0.0)) < 1e-15);
    const Matrix sx2 = pauli(Pauli::x).data * pauli(Pauli::x).data;
    REQUIRE((sx2 - Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("tensor respects qubit-first ordering") {
    const Eigen::Index m = 6;
    const Operator bc = tensor(identity({2}), destroy(m));
    REQUIRE(bc.dims == std::vector<Eigen::Index>{2, m});

    const StateVector g1 = basis_state({2, m}, {0, 1});
    const Vector out = bc.data * g1.amplitudes;
    const StateVector g0 = basis_state({2, m}, {0, 0});
    REQUIRE((out - g0.amplitudes).norm() < 1e-15);

    const Operator szc = tensor(pauli(Pauli::z), identity({m}));
    for (Eigen::Index i = 0; i < szc.size(); ++i)
        REQUIRE(std::abs(std::abs(szc.data(i, i).real()) - 1.0) < 1e-15);
    REQUIRE(tensor(pauli(Pauli::z), destroy(m)).dims == std::vector<Eigen::Index>{2, m});
}

TEST_CASE("tensor is associative and dims-multiplicative") {
    const Operator a = pauli(Pauli::x);
    const Operator b = destroy(3);
    const Operator c = number(4);
    const Operator left = tensor(tensor(a, b), c);
    const Operator right = tensor(a, tensor(b, c));
    REQUIRE((left.data - right.data).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(left.size() == 2 * 3 * 4);
    REQUIRE_THROWS_AS(tensor(std::vector<Operator>{}), InvalidParameterError);
}

TEST_CASE("expect on vacuum, thermal, and identity") {
    const Eigen::Index m = 80;  // large enough that the truncated thermal tail is negligible
    REQUIRE(real_expect(number(m), thermal_state(m, 0.0)) == Approx(0.0).margin(1e-12));
    REQUIRE(real_expect(number(m), thermal_state(m, 2.0)) == Approx(2.0).margin(1e-9));
    REQUIRE(real_expect(identity({m}), thermal_state(m, 1.3)) == Approx(1.0).margin(1e-12));
}

TEST_CASE("expect rejects dimension mismatch") {
    REQUIRE_THROWS_AS(expect(number(5), thermal_state(6, 0.5)), DimensionError);
}

TEST_CASE("expectation of Hermitian operators is real for random mixed states") {
    std::mt19937 gen(42);
    std::normal_distribution<double> dist;
    const Eigen::Index n = 12;
    Matrix raw(n, n);
    for (auto& v : raw.reshaped()) v = Complex(dist(gen), dist(gen));
    Matrix rho = raw * raw.adjoint();
    rho /= rho.trace();
    const DensityMatrix state({n}, rho);

    Matrix hraw(n, n);
    for (auto& v : hraw.reshaped()) v = Complex(dist(gen), dist(gen));
    const Operator herm({n}, Matrix(0.5 * (hraw + hraw.adjoint())));
    REQUIRE(std::abs(expect(herm, state).imag()) < 1e-9);
}

TEST_CASE("basis_state and fock_projector") {
    const StateVector e0 = basis_state({2, 10}, {1, 0});
    REQUIRE(e0.norm() == Approx(1.0));
    REQUIRE(std::abs(e0.amplitudes(10) - Complex(1.0, 0.0)) < 1e-15);

    const DensityMatrix g1 = projector(basis_state({2, 10}, {0, 1}));
    REQUIRE(real_expect(fock_projector(1, 10), g1) == Approx(1.0));

    REQUIRE_THROWS_AS(basis_state({2, 10}, {0, 10}), InvalidParameterError);
    REQUIRE_THROWS_AS(fock_projector(10, 10), InvalidParameterError);
}

TEST_CASE("fock projectors resolve the identity") {
    std::mt19937 gen(7);
    std::normal_distribution<double> dist;
    const Eigen::Index m = 6;
    Matrix raw(2 * m, 2 * m);
    for (auto& v : raw.reshaped()) v = Complex(dist(gen), dist(gen));
    Matrix rho = raw * raw.adjoint();
    rho /= rho.trace();
    const DensityMatrix state({2, m}, rho);
    double total = 0.0;
    for (Eigen::Index n = 0; n < m; ++n) total += real_expect(fock_projector(n, m), state);
    REQUIRE(total == Approx(1.0).margin(1e-10));
}

TEST_CASE("truncated commutator [b, bdag] = I except the last diagonal entry") {
    const Eigen::Index m = 7;
    const Operator b = destroy(m);
    const Matrix comm = b.data * b.data.adjoint() - b.data.adjoint() * b.data;
    for (Eigen::Index i = 0; i + 1 < m; ++i) REQUIRE(comm(i, i).real() == Approx(1.0));
    REQUIRE(comm(m - 1, m - 1).real() == Approx(1.0 - double(m)));
    Matrix offdiag = comm;
    offdiag.diagonal().setZero();
    REQUIRE(offdiag.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adjoint equals elementwise conjugate transpose") {
    const Operator b = destroy(9);
    const Operator bd = b.adjoint();
    for (Eigen::Index i = 0; i < 9; ++i)
        for (Eigen::Index j = 0; j < 9; ++j)
            REQUIRE(bd.data(i, j) == std::conj(b.data(j, i)));
}

TEST_CASE("coherent state has the right norm and mean") {
    const StateVector alpha = coherent_state(10, Complex(std::sqrt(0.3), 0.0));
    REQUIRE(alpha.norm() == Approx(1.0).margin(1e-12));
    REQUIRE(real_expect(number(10), alpha) == Approx(0.3).margin(1e-9));
}

TEST_CASE("density matrix invariants are enforced") {
    Matrix bad = Matrix::Identity(4, 4);
    REQUIRE_THROWS_AS(DensityMatrix({4}, bad).validate(), InvalidParameterError);  // trace 4
    REQUIRE_NOTHROW(thermal_state(12, 0.7).validate());
}
