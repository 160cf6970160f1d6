// thermo.hpp: First- and second-law bookkeeping, local and global
//
// Local (minimal dissipation): energy operator K(t) extracted from the
// generator, U = Tr{Kρ}, W = ∫Tr{K̇ρ}, Q = ∫Tr{Kρ̇}, and the entropy
// production rate σ = −Tr{ρ̇ ln ρ} + Tr{ρ̇ ln ρ⋆} against an instantaneous
// fixed point ρ⋆.
// Global: heat is minus the bath energy change, Σ = ΔS − βQ; the ELB variant
// counts the interaction energy as system energy, the LP variant keeps the
// bare system energy and lets work compensate the heat.
//
// Signs: heat positive into the system, work positive when done on it.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "puredeco/dephasing.hpp"

namespace puredeco {

/// State sample with its time derivative ρ̇ = L_t[ρ].
struct StatePoint {
    double t = 0.0;
    DensityMatrix rho;
    Matrix rho_dot;
};
using StateSeries = std::vector<StatePoint>;

StateSeries attach_derivatives(const Trajectory& traj, const GeneratorFn& generator);

enum class IntegrationRule {
    Trapezoid,
    /// Trapezoid plus the cubic end correction on uniform grids (fourth order).
    CubicCorrected,
};

/// Running integral ∫_{t_0}^{t_i} f, one entry per sample. Non-uniform grids
/// fall back to the plain trapezoid.
std::vector<double> cumulative_integral(std::span<const double> t, std::span<const double> f,
                                        IntegrationRule rule = IntegrationRule::CubicCorrected);

struct EntropyOptions {
    /// Replace ρ by (1−ε)ρ + εI/N before taking logarithms. Off by default.
    bool regularize = false;
    double epsilon = 1e-12;
    /// ρ⋆ must satisfy ‖L[ρ⋆]‖ ≤ ifp_tol·max(1, ‖L‖).
    double ifp_tol = 1e-9;
};

double local_entropy_production_rate(const Superoperator& L, const DensityMatrix& rho, const DensityMatrix& ifp,
                                     const EntropyOptions& opt = {});

/// Chooses an instantaneous fixed point for the generator at time t.
using IfpPolicy = std::function<DensityMatrix(double t, const Superoperator& L)>;

/// First positive representative of the kernel (the maximally mixed state when
/// the identity is a fixed point).
IfpPolicy ifp_from_kernel(double tol = kKernelTol);
/// The same state at all times; it is checked against each generator.
IfpPolicy ifp_fixed(DensityMatrix state);

struct LocalEntropySeries {
    std::vector<double> t;
    std::vector<double> entropy;
    std::vector<double> rate;
    std::vector<double> integral;
    /// D(ρ₀‖ρ⋆) − D(ρ_t‖ρ⋆), present when ρ⋆ is the same at every sample.
    std::optional<std::vector<double>> endpoint_integral;
    double consistency_gap = 0.0;
};

inline constexpr double kEntropyConsistencyTol = 1e-6;

/// Integrates σ over the series. When ρ⋆ is constant, the result is checked
/// against the endpoint identity and a gap above `consistency_tol` throws
/// NumericalError.
LocalEntropySeries local_entropy_production(const StateSeries& series, const GeneratorFn& generator,
                                            const IfpPolicy& policy, const EntropyOptions& opt = {},
                                            double consistency_tol = kEntropyConsistencyTol);

using OperatorFn = std::function<Matrix(double)>;

struct FirstLawSeries {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<double> work;
    std::vector<double> heat;
    std::vector<double> work_rate;
    std::vector<double> heat_rate;
    /// max |ΔU − W − Q| over the series.
    double closure_residual = 0.0;
};

inline constexpr double kFirstLawTol = 1e-8;

/// K̇ from `energy_operator_rate` when given, otherwise by finite differences of K.
FirstLawSeries local_first_law(const OperatorFn& energy_operator, const StateSeries& series,
                               const OperatorFn& energy_operator_rate = nullptr);

struct ClausiusSeries {
    std::vector<double> sigma_cl;
    /// Renormalized inverse temperature, absent where the fit is unsupported.
    std::vector<std::optional<double>> beta_r;
};

/// β_r with ρ⋆ = e^{−β_r K}/Z, from a least-squares fit of ln p against the
/// spectrum of K. Empty when K ∝ I, ρ⋆ does not commute with K, or the Gibbs
/// residual exceeds `residual_tol`.
std::optional<double> renormalized_beta(const Matrix& K, const DensityMatrix& ifp, double residual_tol = 1e-8);

/// σ_cl = Ṡ − βQ̇ with Ṡ = −Tr{ρ̇ ln ρ}, plus β_r wherever it is identifiable.
ClausiusSeries clausius_variants(const StateSeries& series, const FirstLawSeries& first_law, double beta,
                                 const OperatorFn& energy_operator, const GeneratorFn& generator,
                                 const IfpPolicy& policy, const EntropyOptions& opt = {});

struct GlobalSeries {
    std::vector<double> t;
    std::vector<double> heat;             // Q_gl
    std::vector<double> entropy_production;  // Σ_gl
};

/// Q_gl(t) = ⟨H_I⟩_t and Σ_gl = ΔS − βQ_gl. UnsupportedError at zero temperature.
GlobalSeries global_quantities(const SpectralDensity& J, const Temperature& T, const StateSeries& series,
                               const SpectralOptions& opt = {});
/// Same, with the interaction energies already evaluated on the series times.
GlobalSeries global_quantities(std::span<const double> interaction, const Temperature& T, const StateSeries& series);

enum class GlobalConvention { ELB, LP };

struct GlobalFirstLaw {
    std::vector<double> energy;  // U
    std::vector<double> work;    // W
    double closure_residual = 0.0;
};

inline constexpr double kGlobalClosureTol = 1e-10;

/// ELB: U = ⟨H_S⟩ + ⟨H_I⟩, W = 0. LP: U = ⟨H_S⟩, W = −Δ⟨H_I⟩. Each side is
/// computed separately and ΔU = W + Q_gl is asserted within kGlobalClosureTol.
GlobalFirstLaw global_first_law(double omega0, std::span<const double> interaction, const GlobalSeries& global,
                                const StateSeries& series, GlobalConvention convention);

struct ThermoRecord {
    double t = 0.0;
    double S = 0.0;
    double sigma_loc = 0.0;
    double Sigma_loc = 0.0;
    double U_loc = 0.0;
    double W_loc = 0.0;
    double Q_loc = 0.0;
    double Q_gl = 0.0;
    double Sigma_gl = 0.0;
    double U_elb = 0.0;
    double W_elb = 0.0;
    double U_lp = 0.0;
    double W_lp = 0.0;
};

struct Conventions {
    bool local = true;
    bool elb = true;
    bool lp = true;
};

struct ThermoTrace {
    std::vector<ThermoRecord> records;
    ModelParams params;
    Conventions conventions;
    std::vector<std::string> notes;
    double local_closure_residual = 0.0;
    double elb_closure_residual = 0.0;
    double lp_closure_residual = 0.0;
    double entropy_consistency_gap = 0.0;
};

enum class StateSource {
    /// Closed-form solution sampled on the grid.
    Analytic,
    /// Fourth-order integration of the exact master equation.
    Integrated,
};

struct TraceOptions {
    StateSource source = StateSource::Analytic;
    /// Integrator step for StateSource::Integrated; must divide the grid step.
    double integrator_step = 1e-3;
    Conventions conventions;
    SpectralOptions spectral;
    EntropyOptions entropy;
};

/// Full ledger for the qubit dephasing model on `grid`.
ThermoTrace build_thermo_trace(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                               const TraceOptions& opt = {});

/// Throws NumericalError if any enabled convention violates first-law closure.
void check_first_law(const ThermoTrace& trace, double tol = kFirstLawTol);

} // namespace puredeco
