// oracle.hpp: Brute-force reference: qubit plus a few truncated bosonic modes
//
//   H = H_S ⊗ I + I ⊗ Σ_k ω_k b_k†b_k + σ_z ⊗ Σ_k (g_k b_k† + g_k* b_k)
//
// Tensor order: system first, then modes in ascending ω_k. `n_max` is the
// number of Fock levels kept per mode, so the joint dimension is 2·n_max^K.

#pragma once

#include <vector>

#include "puredeco/dephasing.hpp"

namespace puredeco {

struct BathMode {
    double omega = 1.0;
    Complex g = 0.0;
};

inline constexpr double kThermalTailTol = 1e-8;
inline constexpr Eigen::Index kMaxJointDim = 4096;

class FiniteBathSpec {
public:
    /// Sorts modes by frequency. Throws ValidationError when ω_k ≤ 0,
    /// n_max < 2, or some mode keeps more than kThermalTailTol of its thermal
    /// population above the truncation.
    FiniteBathSpec(std::vector<BathMode> modes, int n_max, double beta);

    const std::vector<BathMode>& modes() const noexcept { return modes_; }
    int n_max() const noexcept { return n_max_; }
    double beta() const noexcept { return beta_; }
    Eigen::Index joint_dim() const;

    /// Thermal weight of levels n ≥ n_max for one mode: e^{−βω n_max}.
    static double thermal_tail(double omega, double beta, int n_max);

private:
    std::vector<BathMode> modes_;
    int n_max_;
    double beta_;
};

/// Gauss–Legendre nodes on (0, ω_max) with |g_k|² = J(ω_k) w_k, g_k real.
std::vector<BathMode> discretize_spectral_density(const SpectralDensity& J, int modes, double omega_max);

struct FiniteBathAnalytic {
    double eta = 0.0;
    double interaction_energy = 0.0;
};

/// η_K(t) = Σ 2|g|²(1 − cos ωt)/ω² coth(βω/2) and ⟨H_I⟩_t = −2Σ |g|²(1 − cos ωt)/ω.
FiniteBathAnalytic analytic_finite_bath(const std::vector<BathMode>& modes, double beta, double t);
FiniteBathAnalytic analytic_finite_bath(const FiniteBathSpec& spec, double t);

/// Joint Hamiltonian, diagonalized once; states at any t follow by phases.
class FiniteBathSystem {
public:
    FiniteBathSystem(const FiniteBathSpec& spec, double omega0);

    const FiniteBathSpec& spec() const noexcept { return spec_; }
    Eigen::Index joint_dim() const noexcept { return dim_; }
    Eigen::Index bath_dim() const noexcept { return dim_ / 2; }

    const Matrix& system_part() const noexcept { return h_s_; }      // H_S ⊗ I
    const Matrix& bath_part() const noexcept { return h_e_; }        // I ⊗ H_E
    const Matrix& interaction_part() const noexcept { return h_i_; } // σ_z ⊗ B
    const Matrix& bath_gibbs() const noexcept { return rho_e_; }
    /// ln ρ_E^eq = −βH_E − ln Z_E on the bath factor.
    const Matrix& bath_gibbs_log() const noexcept { return log_rho_e_; }

    DensityMatrix initial_state(const DensityMatrix& rho_s0) const;
    DensityMatrix evolve(const DensityMatrix& rho_s0, double t) const;
    DensityMatrix reduce_to_system(const DensityMatrix& joint) const;

private:
    FiniteBathSpec spec_;
    Eigen::Index dim_;
    Matrix h_s_, h_e_, h_i_;
    Matrix rho_e_, log_rho_e_;
    RealVector energies_;
    Matrix eigvecs_;
};

DensityMatrix finite_bath_evolve(const FiniteBathSpec& spec, double omega0, const DensityMatrix& rho_s0, double t);

struct JointRecord {
    double t = 0.0;
    double Q_gl = 0.0;
    double Sigma_gl = 0.0;
    double Sigma_gl_relent = 0.0;
    double interaction_energy = 0.0;
    /// Δ⟨H_S⟩ + Δ⟨H_E⟩ + Δ⟨H_I⟩.
    double energy_residual = 0.0;
    double coherence = 0.0;  // |ρ⁰¹| of the reduced state
    double purity = 0.0;     // Tr ρ_SE²
};

/// Q_gl = ⟨H_E⟩₀ − ⟨H_E⟩_t, Σ_gl = ΔS_S − βQ_gl, and Σ from the joint relative
/// entropy D(ρ_SE(t) ‖ ρ_S(t) ⊗ ρ_E^eq). `states` must start at t = 0.
std::vector<JointRecord> global_quantities_from_joint(const FiniteBathSystem& sys,
                                                      const std::vector<double>& times,
                                                      const std::vector<DensityMatrix>& states);

} // namespace puredeco
