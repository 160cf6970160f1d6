#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "puredeco/errors.hpp"
#include "puredeco/linops.hpp"

using namespace puredeco;

namespace {

Matrix fig1_state()
{
    Matrix m(2, 2);
    m << 0.25, 0.25, 0.25, 0.75;
    return m;
}

} // namespace

TEST_SUITE("linops") {

TEST_CASE("eig_hermitian on small known matrices")
{
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    const auto e = eig_hermitian(sz);
    CHECK(e.values(0) == doctest::Approx(-1.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(1, 1)) == doctest::Approx(1.0));

    const auto f = eig_hermitian(fig1_state());
    const auto [lo, hi] = oracle::qubit_eigenvalues(0.25, 0.75, 0.25);
    CHECK(std::abs(f.values(0) - lo) < 1e-14);
    CHECK(std::abs(f.values(1) - hi) < 1e-14);
    CHECK(std::abs(lo - (1.0 - std::sqrt(0.5)) / 2.0) < 1e-15);

    const auto id = eig_hermitian(Matrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian rejects non-Hermitian input")
{
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_hermitian(a), ValidationError);
}

TEST_CASE("eig_hermitian reconstructs random Hermitian matrices")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const Matrix a = oracle::random_hermitian(rng, n);
        const auto e = eig_hermitian(a);
        const Matrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        CHECK(max_abs(rec - a) <= 1e-11);
        CHECK(max_abs(e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)) <= 1e-12);
        for (int i = 1; i < n; ++i) CHECK(e.values(i) >= e.values(i - 1));
    }
}

TEST_CASE("DensityMatrix validation")
{
    CHECK_NOTHROW(DensityMatrix(fig1_state()));
    Matrix bad_trace = fig1_state() * 1.1;
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, ValidationError);
    Matrix negative(2, 2);
    negative << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityMatrix{negative}, ValidationError);
    Matrix nonherm = fig1_state();
    nonherm(0, 1) = Complex(0.25, 0.1);
    CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);
    Matrix nan = fig1_state();
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(DensityMatrix{nan}, ValidationError);
}

TEST_CASE("von Neumann entropy")
{
    Vector psi = Vector::Zero(2);
    psi(1) = 1.0;
    CHECK(std::abs(von_neumann_entropy(DensityMatrix::pure(psi))) < 1e-15);

    const std::array<double, 2> p{0.25, 0.75};
    const double s_diag = von_neumann_entropy(DensityMatrix::diagonal(p));
    CHECK(std::abs(s_diag - (-0.25 * std::log(0.25) - 0.75 * std::log(0.75))) < 1e-15);
    CHECK(s_diag == doctest::Approx(0.5623).epsilon(1e-4));

    const double s_fig = von_neumann_entropy(DensityMatrix(fig1_state()));
    CHECK(std::abs(s_fig - oracle::qubit_entropy(0.25, 0.75, 0.25)) < 1e-14);
    CHECK(s_fig == doctest::Approx(0.4165).epsilon(1e-4));

    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("entropy clips tiny negative eigenvalues and is unitarily invariant")
{
    Matrix m(2, 2);
    m << 1.0 + 5e-13, 0.0, 0.0, -5e-13;
    const DensityMatrix rho(m);
    CHECK(std::abs(von_neumann_entropy(rho)) < 1e-12);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const DensityMatrix r(oracle::random_state(rng, n));
        const Matrix u = oracle::random_unitary(rng, n);
        const DensityMatrix ru = DensityMatrix::normalized(u * r.matrix() * u.adjoint());
        CHECK(std::abs(von_neumann_entropy(r) - von_neumann_entropy(ru)) <= 1e-11);
        CHECK(von_neumann_entropy(r) <= std::log(n) + 1e-12);
    }
}

TEST_CASE("relative entropy")
{
    const std::array<double, 2> p{0.25, 0.75}, q{0.5, 0.5};
    const auto rp = DensityMatrix::diagonal(p);
    const auto rq = DensityMatrix::diagonal(q);
    const double expected = 0.25 * std::log(0.25 / 0.5) + 0.75 * std::log(0.75 / 0.5);
    CHECK(std::abs(relative_entropy(rp, rq) - expected) < 1e-15);
    CHECK(expected == doctest::Approx(0.1308).epsilon(1e-3));
    CHECK(std::abs(relative_entropy(rp, rp)) < 1e-15);

    Vector psi = Vector::Zero(2);
    psi(1) = 1.0;
    CHECK(std::abs(relative_entropy(DensityMatrix::pure(psi), rq) - std::log(2.0)) < 1e-15);

    // support violation names the offending eigenvalue
    CHECK_THROWS_AS(relative_entropy(rq, DensityMatrix::pure(psi)), DomainError);
    try {
        relative_entropy(rq, DensityMatrix::pure(psi));
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }
}

TEST_CASE("Klein inequality on random full-rank pairs")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 3;
        const DensityMatrix a(oracle::random_state(rng, n));
        const DensityMatrix b(oracle::random_state(rng, n));
        CHECK(relative_entropy(a, b) >= -1e-13);
    }
}

TEST_CASE("partial trace")
{
    std::mt19937_64 rng(23);
    const Matrix a = oracle::random_state(rng, 2);
    const Matrix b = oracle::random_state(rng, 3);
    const std::array<Eigen::Index, 2> dims{2, 3};
    const DensityMatrix ab(kron(a, b));
    CHECK(max_abs(partial_trace(ab, dims, 0).matrix() - a) <= 1e-12);
    CHECK(max_abs(partial_trace(ab, dims, 1).matrix() - b) <= 1e-12);

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const std::array<Eigen::Index, 2> qq{2, 2};
    const DensityMatrix rb = DensityMatrix::pure(bell);
    CHECK(max_abs(partial_trace(rb, qq, 0).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs(partial_trace(rb, qq, 1).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);

    // Entangled random 2⊗3 state against an explicit index sum.
    const Matrix r = oracle::random_state(rng, 6);
    Matrix keep0 = Matrix::Zero(2, 2), keep1 = Matrix::Zero(3, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k) keep0(i, j) += r(i * 3 + k, j * 3 + k);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 2; ++k) keep1(i, j) += r(k * 3 + i, k * 3 + j);
    CHECK(max_abs(partial_trace(DensityMatrix(r), dims, 0).matrix() - keep0) < 1e-14);
    CHECK(max_abs(partial_trace(DensityMatrix(r), dims, 1).matrix() - keep1) < 1e-14);

    const std::array<Eigen::Index, 2> wrong{2, 2};
    CHECK_THROWS_AS(partial_trace(DensityMatrix(r), wrong, 0), ValidationError);
}

TEST_CASE("kron follows the left-factor-outer convention")
{
    Matrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const Matrix k = kron(a, b);
    CHECK(k(0, 1) == Complex(1.0));
    CHECK(k(2, 1) == Complex(3.0));
    CHECK(k(3, 0) == Complex(3.0));
    CHECK(k(2, 3) == Complex(4.0));
}

TEST_CASE("log_state refuses rank-deficient states")
{
    const std::array<double, 2> p{0.0, 1.0};
    CHECK_THROWS_AS(log_state(DensityMatrix::diagonal(p)), DomainError);
}

} // TEST_SUITE
