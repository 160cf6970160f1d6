// dephasing.hpp: Qubit linearly coupled to a bosonic bath through σ_z
//
// Basis convention (project wide): index 0 ↔ σ_z = −1, index 1 ↔ σ_z = +1.
// H_S = (ω₀/2) σ_z. Populations are conserved; the coherence evolves as
//   ρ⁰¹(t) = ρ⁰¹(0) e^{iω₀t} e^{−η(t)},
// generated by the exact time-local equation
//   ρ̇ = −i[H_S, ρ] + Γ(t)(σ_z ρ σ_z − ρ).

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "puredeco/liouville.hpp"
#include "puredeco/spectral.hpp"

namespace puredeco {

struct ModelParams {
    double omega0 = 1.0;
    SpectralDensity spectral = SpectralDensity::ohmic(1.0, 1.0);
    Temperature temperature = Temperature::finite(1.0);
};

/// Uniform grid 0, step, 2·step, …, t_end.
class TimeGrid {
public:
    TimeGrid(double t_end, double step);

    double t_end() const noexcept { return t_end_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return count_ + 1; }
    double operator[](std::size_t i) const noexcept;
    std::vector<double> points() const;

private:
    double t_end_;
    double step_;
    std::size_t count_;
};

Matrix sigma_z();
Matrix system_hamiltonian(double omega0);

/// ρ(t) from the closed-form solution; ρ₀ in the σ_z eigenbasis.
DensityMatrix analytic_state(const ModelParams& p, const DensityMatrix& rho0, double t,
                             const SpectralOptions& opt = {});
/// Same, with η(t) supplied by the caller.
DensityMatrix analytic_state_from_eta(double omega0, const DensityMatrix& rho0, double t, double eta);

Superoperator generator_with_rate(double omega0, double gamma);
Superoperator exact_generator(const ModelParams& p, double t, const SpectralOptions& opt = {});

/// Γ(t) and Γ̇(t) tabulated on a uniform grid, cubic-Hermite interpolated in between.
class RateTable {
public:
    RateTable(const ModelParams& p, const TimeGrid& grid, const SpectralOptions& opt = {});
    RateTable(double step, std::vector<double> gamma, std::vector<double> gamma_dot);

    double operator()(double t) const;
    double derivative(double t) const;
    double step() const noexcept { return step_; }
    double t_end() const noexcept { return step_ * static_cast<double>(gamma_.size() - 1); }
    std::span<const double> samples() const noexcept { return gamma_; }

private:
    double step_;
    std::vector<double> gamma_;
    std::vector<double> gamma_dot_;
};

using GeneratorFn = std::function<Superoperator(double)>;

struct TrajectorySample {
    double t = 0.0;
    DensityMatrix rho;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    /// Largest |Tr ρ − 1| removed by renormalization in any single step.
    double max_trace_drift = 0.0;
    /// Largest anti-Hermitian part removed in any single step.
    double max_hermiticity_drift = 0.0;
    /// Per-step trace drift, one entry per integration step.
    std::vector<double> trace_drift_log;
};

struct IntegratorOptions {
    /// Keep every n-th step in the output (the final point is always kept).
    std::size_t record_every = 1;
    double positivity_tol = 1e-8;
};

/// Classic fourth-order Runge–Kutta on vec(ρ). Each step is re-Hermitized and
/// trace-renormalized; the removed drift is recorded. Throws
/// IntegrationDriftError when an eigenvalue drops below −positivity_tol.
Trajectory integrate_tcl(const GeneratorFn& generator, const DensityMatrix& rho0, const TimeGrid& grid,
                         const IntegratorOptions& opt = {});

/// Generator t ↦ L_t of the model with Γ taken from `rates`.
GeneratorFn model_generator(double omega0, std::shared_ptr<const RateTable> rates);

} // namespace puredeco
