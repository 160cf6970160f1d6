// scenario.hpp: Run configurations for the dephasing model and the finite-bath check
//
// Config grammar: one `key = value` per line, `#` starts a comment, blank
// lines ignored. Lists (conventions, cutoff_sweep) are comma separated.
//
//   omega0, alpha, cutoff, beta         model (beta = inf selects zero temperature)
//   spectral_file                       tabulated J, CSV with header `omega,J`
//   rho11_0, rho01_re, rho01_im         initial state
//   t_max, dt                           output grid
//   conventions                         subset of local, elb, lp
//   cutoff_sweep                        cutoff values for figure runs
//   integrator, integrator_step         analytic | rk4
//   bath_modes, n_max, omega_max, oracle_tol   finite-bath comparison

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "puredeco/oracle.hpp"
#include "puredeco/thermo.hpp"

namespace puredeco {

struct ScenarioConfig {
    double omega0 = 1.0;
    double alpha = 1.0;
    double cutoff = 1.0;
    double beta = 1.0;  // +inf: zero temperature
    std::string spectral_file;
    double rho11_0 = 0.75;
    double rho01_re = 0.25;
    double rho01_im = 0.0;
    double t_max = 20.0;
    double dt = 0.01;
    Conventions conventions;
    std::vector<double> cutoff_sweep{0.5, 1.0, 2.0};
    StateSource integrator = StateSource::Analytic;
    double integrator_step = 1e-3;

    int bath_modes = 2;
    int n_max = 8;
    double omega_max = 6.0;
    double oracle_tol = 1e-6;

    /// Defaults for the finite-bath comparison: weak coupling, β = 2, short grid.
    static ScenarioConfig oracle_defaults();

    DensityMatrix initial_state() const;
    ModelParams model() const;
    TimeGrid grid() const;
    /// Throws ValidationError naming the offending key.
    void validate() const;
};

/// Sets one key. Throws ValidationError for unknown keys or unparsable values.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);
/// Parses config text on top of `base`; errors carry the line number.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});
std::vector<std::string> config_keys();

ThermoTrace run_scenario(const ScenarioConfig& cfg);

struct OracleRow {
    double t = 0.0;
    double coherence_analytic = 0.0;
    double coherence_exact = 0.0;
    double interaction_analytic = 0.0;
    double interaction_exact = 0.0;
    double Q_gl_exact = 0.0;
    double Sigma_gl_analytic = 0.0;
    double Sigma_gl_exact = 0.0;
    double Sigma_gl_relent = 0.0;
    double energy_residual = 0.0;
};

struct OracleCheck {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    std::vector<OracleCheck> checks;
    bool passed() const;
};

OracleReport oracle_run(const ScenarioConfig& cfg);

} // namespace puredeco
