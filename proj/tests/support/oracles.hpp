// oracles.hpp: Independent reference computations for the tests
//
// Nothing here calls the library's quadrature, eigen-solvers or thermodynamic
// code paths; each function is a separate derivation of a known quantity.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Eigenvalues of a 2×2 density matrix [[p0, c], [c*, p1]] in closed form.
inline std::pair<double, double> qubit_eigenvalues(double p0, double p1, Complex c)
{
    const double r = std::sqrt((p1 - p0) * (p1 - p0) + 4.0 * std::norm(c));
    const double tr = p0 + p1;
    return {0.5 * (tr - r), 0.5 * (tr + r)};
}

inline double qubit_entropy(double p0, double p1, Complex c)
{
    const auto [a, b] = qubit_eigenvalues(p0, p1, c);
    auto h = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return h(a) + h(b);
}

// Ohmic bath J = αω e^{−ω/Ω} at finite β, from coth x = 1 + 2Σ e^{−2nx}.
// Each term integrates in closed form; the remainder after N terms is
// replaced by its integral over n (midpoint rule), which is accurate to
// O(N^{-4}).
struct OhmicSeries {
    double alpha, cutoff, beta;
    int terms = 4000;

    double eta(double t) const
    {
        auto term = [t](double u) { return std::log1p(t * t / (u * u)); };
        const double u0 = 1.0 / cutoff;
        double sum = 0.0;
        for (int n = 1; n <= terms; ++n) sum += term(u0 + n * beta);
        const double U = u0 + (terms + 0.5) * beta;
        const double tail = (std::numbers::pi * t - U * std::log1p(t * t / (U * U)) - 2.0 * t * std::atan(U / t)) / beta;
        return alpha * term(u0) + 2.0 * alpha * (sum + tail);
    }

    double gamma(double t) const
    {
        auto term = [t](double u) { return t / (u * u + t * t); };
        const double u0 = 1.0 / cutoff;
        double sum = 0.0;
        for (int n = 1; n <= terms; ++n) sum += term(u0 + n * beta);
        const double U = u0 + (terms + 0.5) * beta;
        const double tail = (0.5 * std::numbers::pi - std::atan(U / t)) / beta;
        return alpha * term(u0) + 2.0 * alpha * (sum + tail);
    }
};

/// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n)
{
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Central five-point derivative.
template <class F>
double derivative(F f, double x, double h)
{
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline Matrix random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

inline Matrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    return a;
}

/// Full-rank random density matrix (Wishart-like), eigenvalues bounded away from 0.
inline Matrix random_state(std::mt19937_64& rng, int n, double floor = 0.02)
{
    const Matrix a = random_matrix(rng, n);
    Matrix r = a * a.adjoint();
    r /= r.trace().real();
    r = (1.0 - n * floor) * r + floor * Matrix::Identity(n, n);
    return r;
}

/// Random unitary from the QR factorization of a complex Gaussian matrix.
inline Matrix random_unitary(std::mt19937_64& rng, int n)
{
    Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
    return qr.householderQ() * Matrix::Identity(n, n);
}

/// Diagonal (in `basis`) dephasing data: H_d real diagonal energies and
/// diagonal Lindblad operators with nonnegative rates. The resulting
/// coefficients γ_kl = −i(h_k − h_l) + Σ_a r_a (L_k L_l* − |L_k|²/2 − |L_l|²/2)
/// satisfy γ_kk = 0, γ_lk = γ_kl*, Re γ_kl ≤ 0.
struct DephasingData {
    std::vector<double> energies;
    std::vector<double> rates;
    std::vector<std::vector<Complex>> ops;  // diagonal entries

    Complex gamma(int k, int l) const
    {
        Complex g(0.0, -(energies[k] - energies[l]));
        for (std::size_t a = 0; a < ops.size(); ++a) {
            const Complex lk = ops[a][k], ll = ops[a][l];
            g += rates[a] * (lk * std::conj(ll) - 0.5 * std::norm(lk) - 0.5 * std::norm(ll));
        }
        return g;
    }
};

inline DephasingData random_dephasing(std::mt19937_64& rng, int n, int channels = 2)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    DephasingData d;
    for (int i = 0; i < n; ++i) d.energies.push_back(g(rng));
    for (int a = 0; a < channels; ++a) {
        d.rates.push_back(u(rng));
        std::vector<Complex> op;
        for (int i = 0; i < n; ++i) op.emplace_back(g(rng), g(rng));
        d.ops.push_back(op);
    }
    return d;
}

/// ρ̇ of the dephasing data applied directly in the basis: ρ̇_kl = γ_kl ρ_kl.
inline Matrix dephasing_rhs(const DephasingData& d, const Matrix& rho_in_basis)
{
    const int n = static_cast<int>(rho_in_basis.rows());
    Matrix out(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(k, l) = d.gamma(k, l) * rho_in_basis(k, l);
    return out;
}

/// ρ(t) = exp(t·L)ρ for time-independent dephasing: ρ_kl(t) = e^{γ_kl t} ρ_kl.
inline Matrix dephasing_evolve(const DephasingData& d, const Matrix& rho, double t)
{
    const int n = static_cast<int>(rho.rows());
    Matrix out(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(k, l) = std::exp(d.gamma(k, l) * t) * rho(k, l);
    return out;
}

/// Von Neumann entropy via Eigen's self-adjoint solver (not the library's wrapper).
inline double entropy(const Matrix& rho)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double x = es.eigenvalues()(i);
        if (x > 0.0) s -= x * std::log(x);
    }
    return s;
}

} // namespace oracle
