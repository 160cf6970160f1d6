// spectral.hpp: Spectral densities and the bath frequency integrals
//
//   η(t)    = 2 ∫ J(ω) (1 − cos ωt)/ω² coth(βω/2) dω   decoherence function
//   Γ(t)    =   ∫ J(ω) sin(ωt)/ω coth(βω/2) dω         dephasing rate, η̇/2
//   ⟨H_I⟩_t = −2 ∫ J(ω) (1 − cos ωt)/ω dω               interaction energy
//
// Units: ħ = k_B = 1, energies and frequencies in one arbitrary unit.

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

namespace puredeco {

class SpectralDensity {
public:
    enum class Kind { OhmicExponential, Tabulated };

    /// J(ω) = α ω e^{−ω/Ω}.
    static SpectralDensity ohmic(double alpha, double cutoff);
    /// Linear interpolation through (ω_i, J_i); J vanishes beyond the last node
    /// and is interpolated from (0, 0) below the first one.
    static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> values);
    /// Two-column CSV with header `omega,J`.
    static SpectralDensity load_csv(const std::filesystem::path& path);

    Kind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double cutoff() const noexcept { return cutoff_; }

    double operator()(double omega) const;
    /// J(ω)/ω, finite as ω → 0.
    double over_omega(double omega) const;
    /// Frequency beyond which the integrands are negligible at relative tolerance `tol`.
    double upper_limit(double tol) const;
    /// Characteristic frequency used to choose quadrature panels.
    double scale() const noexcept;
    /// Same density with the coupling multiplied by `factor`.
    SpectralDensity scaled(double factor) const;

private:
    Kind kind_ = Kind::OhmicExponential;
    double alpha_ = 0.0;
    double cutoff_ = 1.0;
    std::vector<double> omega_;
    std::vector<double> values_;
};

class Temperature {
public:
    static Temperature finite(double beta);
    static Temperature zero();

    bool is_zero() const noexcept { return !beta_.has_value(); }
    /// Throws UnsupportedError in zero-temperature mode.
    double beta() const;
    /// ω coth(βω/2); equals ω at zero temperature.
    double omega_coth(double omega) const;

private:
    std::optional<double> beta_;
};

struct SpectralOptions {
    double rel_tol = 1e-10;
};

double decoherence_eta(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt = {});
double rate_gamma(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt = {});
/// Γ̇(t) = ∫ J(ω) cos(ωt) coth(βω/2) dω.
double rate_gamma_derivative(const SpectralDensity& J, const Temperature& T, double t,
                             const SpectralOptions& opt = {});
double interaction_energy(const SpectralDensity& J, double t, const SpectralOptions& opt = {});

struct BathIntegrals {
    double eta = 0.0;
    double gamma = 0.0;
    double gamma_dot = 0.0;
    double interaction_energy = 0.0;
};

/// All four integrals from one pass over shared quadrature nodes.
BathIntegrals bath_integrals(const SpectralDensity& J, const Temperature& T, double t,
                             const SpectralOptions& opt = {});

/// Γ and Γ̇ only (η and ⟨H_I⟩ left at zero), one pass.
BathIntegrals rate_integrals(const SpectralDensity& J, const Temperature& T, double t,
                             const SpectralOptions& opt = {});

/// Long-time dephasing rate απ/β.
double markov_rate(double alpha, double beta);

// Ohmic closed forms. η and Γ exist in closed form only at zero temperature;
// asking for them at finite β throws UnsupportedError.
double ohmic_eta_closed(double alpha, double cutoff, const Temperature& T, double t);
double ohmic_gamma_closed(double alpha, double cutoff, const Temperature& T, double t);
double ohmic_interaction_energy_closed(double alpha, double cutoff, double t);

struct OhmicClosedForms {
    std::optional<double> eta;
    std::optional<double> gamma;
    double interaction_energy = 0.0;
};

OhmicClosedForms ohmic_closed_forms(double alpha, double cutoff, const Temperature& T, double t);

} // namespace puredeco
