// linops.hpp: Dense complex linear algebra for small Hilbert spaces
//
// Vectorization convention (used by every module): column stacking,
// vec(A X B) = (B^T ⊗ A) vec(X). Eigen's column-major storage makes
// vec(X) a plain reinterpretation of the matrix data.

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace puredeco {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-12;
/// Eigenvalues in [-kEigenClip, 0) are treated as round-off and clipped to zero.
inline constexpr double kEigenClip = 1e-10;
inline constexpr double kSupportTol = 1e-12;

/// Density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    /// Validates and stores `m`. Throws ValidationError on failure.
    explicit DensityMatrix(Matrix m, double positivity_tol = kPositivityTol);

    /// Re-Hermitizes and renormalizes the trace before validating.
    static DensityMatrix normalized(const Matrix& m, double positivity_tol = kPositivityTol);

    static DensityMatrix maximally_mixed(Eigen::Index dim);
    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix diagonal(std::span<const double> populations);

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    Matrix m_;
};

struct HermitianEigen {
    RealVector values;  // ascending
    Matrix vectors;     // columns are orthonormal eigenvectors
};

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
Matrix hermitize(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

/// Throws ValidationError unless `a` is Hermitian within `tol` (max elementwise).
void require_hermitian(const Matrix& a, const char* what, double tol = kHermitianTol);

HermitianEigen eig_hermitian(const Matrix& a, double tol = kHermitianTol);

/// f(A) = V diag(f(λ)) V† for Hermitian A.
Matrix hermitian_function(const Matrix& a, const std::function<double(double)>& f);

/// ln ρ for a full-rank state. Throws DomainError when an eigenvalue is <= `floor`.
Matrix log_state(const DensityMatrix& rho, double floor = kSupportTol);

/// Eigenvalues of ρ with [-kEigenClip, 0) clipped to 0; throws ValidationError below that.
RealVector clipped_spectrum(const DensityMatrix& rho);

/// S(ρ) = -Σ λ ln λ in nats.
double von_neumann_entropy(const DensityMatrix& rho);

/// D(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ in nats; DomainError when supp ρ ⊄ supp σ.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        double support_tol = kSupportTol);

/// Traces out every factor except `keep`. Factors are ordered left to right,
/// i.e. kron(A, B) has A at index 0.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Eigen::Index> dims,
                            std::size_t keep);
Matrix partial_trace(const Matrix& op, std::span<const Eigen::Index> dims, std::size_t keep);

} // namespace puredeco
