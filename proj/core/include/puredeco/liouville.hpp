// liouville.hpp: Time-local generators on vectorized operators
//
// Generators act on column-stacked operators (see linops.hpp). A GKSL
// generator with Hamiltonian H and terms (γ_k, L_k) realizes
//   ρ̇ = −i[H, ρ] + Σ_k γ_k (L_k ρ L_k† − ½{L_k† L_k, ρ}),
// with rates allowed to be negative (time-convolutionless dynamics).

#pragma once

#include <optional>
#include <vector>

#include "puredeco/linops.hpp"

namespace puredeco {

struct LindbladTerm {
    double rate = 0.0;  // 1/time, may be negative
    Matrix op;
};

inline constexpr double kSuperopTol = 1e-10;

class Superoperator {
public:
    /// Wraps an N²×N² matrix. Throws ValidationError if it is not square with a
    /// perfect-square side, or if `check` is set and an invariant fails.
    Superoperator(Eigen::Index dim, Matrix m, bool check = true);

    static Superoperator zero(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return dim_; }
    const Matrix& matrix() const noexcept { return m_; }

    /// Largest |vec(I)† L| entry; zero for trace-annihilating maps.
    double trace_defect() const;
    /// Largest deviation of L[X†] from L[X]† over the matrix-unit basis.
    double hermiticity_defect() const;
    /// Throws ValidationError if either defect exceeds `tol`.
    void check_invariants(double tol = kSuperopTol) const;

    Superoperator operator+(const Superoperator& other) const;
    Superoperator operator*(double s) const;

private:
    Eigen::Index dim_;
    Matrix m_;
};

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index dim);

Superoperator build_superoperator(const Matrix& hamiltonian, const std::vector<LindbladTerm>& terms);

/// L[X] for an arbitrary operator X.
Matrix apply(const Superoperator& L, const Matrix& x);
Matrix apply(const Superoperator& L, const DensityMatrix& rho);

/// Direct operator-form evaluation of −i[H,X] + Σ γ (L X L† − ½{L†L, X}).
Matrix apply_gksl(const Matrix& hamiltonian, const std::vector<LindbladTerm>& terms, const Matrix& x);

struct FixedPointSet {
    std::vector<Matrix> kernel_basis;   // Hermitian, orthonormal in Hilbert–Schmidt
    std::vector<DensityMatrix> states;  // positive unit-trace members of the kernel
    std::size_t kernel_dim() const noexcept { return kernel_basis.size(); }
};

inline constexpr double kKernelTol = 1e-9;

/// Kernel of L via SVD with relative threshold tol·σ_max. Throws NumericalError
/// "no IFP found" when the kernel is empty.
FixedPointSet instantaneous_fixed_points(const Superoperator& L, double tol = kKernelTol);

/// K = (1/2iN) Σ_{m,n} [|n⟩⟨m|, L[|m⟩⟨n|]] over the columns of `basis`
/// (identity when omitted). Returns the traceless Hermitian part.
Matrix effective_hamiltonian(const Superoperator& L, const std::optional<Matrix>& basis = std::nullopt);

struct MinimalDissipationForm {
    Matrix hamiltonian;               // traceless K
    std::vector<LindbladTerm> terms;  // traceless Lindblad operators
};

MinimalDissipationForm to_minimal_dissipation(const Matrix& hamiltonian,
                                              const std::vector<LindbladTerm>& terms);

/// Pure-decoherence generator L[ρ] = Σ_jk γ_jk |j⟩⟨j| ρ |k⟩⟨k| in the orthonormal
/// basis given by the columns of `basis`.
struct DephasingCoefficients {
    Matrix gamma;
    Matrix basis;

    Eigen::Index dim() const noexcept { return gamma.rows(); }
    /// γ_jk = γ_kj*, γ_jj = 0 within `tol`; throws ValidationError otherwise.
    void validate(double tol = kSuperopTol) const;
};

inline constexpr double kStructureTol = 1e-9;

/// Expands L over |j⟩⟨k|·|l⟩⟨n| and extracts γ_jk = γ_jjkk. Throws ValidationError
/// naming the largest off-structure coefficient when L is not pure decoherence
/// in this basis.
DephasingCoefficients dephasing_coefficients(const Superoperator& L, const Matrix& basis,
                                             double tol = kStructureTol);

Superoperator dephasing_superoperator(const DephasingCoefficients& c);

/// K = (1/N) Σ_n (Σ_m Im γ_mn) |n⟩⟨n| in the stored basis.
Matrix dephasing_effective_hamiltonian(const DephasingCoefficients& c);

} // namespace puredeco
