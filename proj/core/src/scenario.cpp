// scenario.cpp: Config parsing and the two top-level pipelines

#include "puredeco/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_real(const std::string& key, const std::string& text)
{
    const std::string v = trim(text);
    if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError("config key '" + key + "': '" + v + "' is not a number");
}

int parse_int(const std::string& key, const std::string& text)
{
    const std::string v = trim(text);
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError("config key '" + key + "': '" + v + "' is not an integer");
}

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok) throw ValidationError("config key '" + key + "': " + what);
}

SpectralDensity spectral_of(const ScenarioConfig& cfg)
{
    if (!cfg.spectral_file.empty()) return SpectralDensity::load_csv(cfg.spectral_file);
    return SpectralDensity::ohmic(cfg.alpha, cfg.cutoff);
}

double max_dev(const std::vector<OracleRow>& rows, double OracleRow::*a, double OracleRow::*b)
{
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.*a - r.*b));
    return m;
}

} // namespace

ScenarioConfig ScenarioConfig::oracle_defaults()
{
    ScenarioConfig c;
    c.alpha = 0.02;
    c.cutoff = 1.0;
    c.beta = 2.0;
    c.t_max = 10.0;
    c.dt = 0.1;
    return c;
}

DensityMatrix ScenarioConfig::initial_state() const
{
    Matrix m(2, 2);
    m(0, 0) = 1.0 - rho11_0;
    m(1, 1) = rho11_0;
    m(0, 1) = Complex(rho01_re, rho01_im);
    m(1, 0) = std::conj(m(0, 1));
    try {
        return DensityMatrix(m);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config keys 'rho11_0', 'rho01_re', 'rho01_im': ") + e.what());
    }
}

ModelParams ScenarioConfig::model() const
{
    ModelParams p;
    p.omega0 = omega0;
    p.spectral = spectral_of(*this);
    p.temperature = std::isinf(beta) ? Temperature::zero() : Temperature::finite(beta);
    return p;
}

TimeGrid ScenarioConfig::grid() const
{
    try {
        return TimeGrid(t_max, dt);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config keys 't_max', 'dt': ") + e.what());
    }
}

void ScenarioConfig::validate() const
{
    require(std::isfinite(omega0), "omega0", "must be finite");
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha", "must be finite and >= 0");
    require(std::isfinite(cutoff) && cutoff > 0.0, "cutoff", "must be finite and > 0");
    require(beta > 0.0 && !std::isnan(beta), "beta", "must be > 0 (inf selects zero temperature)");
    require(rho11_0 >= 0.0 && rho11_0 <= 1.0, "rho11_0", "must lie in [0, 1]");
    require(std::isfinite(rho01_re) && std::isfinite(rho01_im), "rho01_re", "coherence must be finite");
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
    require(std::isfinite(t_max) && t_max > 0.0, "t_max", "must be > 0");
    require(conventions.local || conventions.elb || conventions.lp, "conventions", "select at least one");
    for (double c : cutoff_sweep) require(std::isfinite(c) && c > 0.0, "cutoff_sweep", "values must be > 0");
    require(std::isfinite(integrator_step) && integrator_step > 0.0, "integrator_step", "must be > 0");
    require(bath_modes >= 1, "bath_modes", "must be >= 1");
    require(n_max >= 2, "n_max", "must be >= 2");
    require(std::isfinite(omega_max) && omega_max > 0.0, "omega_max", "must be > 0");
    require(oracle_tol > 0.0, "oracle_tol", "must be > 0");
    initial_state();
    grid();
}

std::vector<std::string> config_keys()
{
    return {"omega0",  "alpha",     "cutoff",      "beta",         "spectral_file", "rho11_0",
            "rho01_re", "rho01_im", "t_max",       "dt",           "conventions",   "cutoff_sweep",
            "integrator", "integrator_step", "bath_modes", "n_max", "omega_max",  "oracle_tol"};
}

void apply_setting(ScenarioConfig& cfg, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "omega0") cfg.omega0 = parse_real(key, value);
    else if (key == "alpha") cfg.alpha = parse_real(key, value);
    else if (key == "cutoff") cfg.cutoff = parse_real(key, value);
    else if (key == "beta") cfg.beta = parse_real(key, value);
    else if (key == "spectral_file") cfg.spectral_file = value;
    else if (key == "rho11_0") cfg.rho11_0 = parse_real(key, value);
    else if (key == "rho01_re") cfg.rho01_re = parse_real(key, value);
    else if (key == "rho01_im") cfg.rho01_im = parse_real(key, value);
    else if (key == "t_max") cfg.t_max = parse_real(key, value);
    else if (key == "dt") cfg.dt = parse_real(key, value);
    else if (key == "integrator_step") cfg.integrator_step = parse_real(key, value);
    else if (key == "bath_modes") cfg.bath_modes = parse_int(key, value);
    else if (key == "n_max") cfg.n_max = parse_int(key, value);
    else if (key == "omega_max") cfg.omega_max = parse_real(key, value);
    else if (key == "oracle_tol") cfg.oracle_tol = parse_real(key, value);
    else if (key == "conventions") {
        Conventions c{false, false, false};
        for (const auto& item : split_list(value)) {
            if (item == "local") c.local = true;
            else if (item == "elb") c.elb = true;
            else if (item == "lp") c.lp = true;
            else throw ValidationError("config key 'conventions': unknown convention '" + item + "'");
        }
        cfg.conventions = c;
    } else if (key == "cutoff_sweep") {
        cfg.cutoff_sweep.clear();
        for (const auto& item : split_list(value)) cfg.cutoff_sweep.push_back(parse_real(key, item));
        require(!cfg.cutoff_sweep.empty(), key, "needs at least one value");
    } else if (key == "integrator") {
        if (value == "analytic") cfg.integrator = StateSource::Analytic;
        else if (value == "rk4") cfg.integrator = StateSource::Integrated;
        else throw ValidationError("config key 'integrator': expected 'analytic' or 'rk4', got '" + value + "'");
    } else {
        throw ValidationError("unknown config key '" + key + "'");
    }
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig base)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

ThermoTrace run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    TraceOptions opt;
    opt.source = cfg.integrator;
    opt.integrator_step = cfg.integrator_step;
    opt.conventions = cfg.conventions;
    if (std::isinf(cfg.beta) && (opt.conventions.elb || opt.conventions.lp)) {
        throw UnsupportedError("global conventions need a finite beta; set conventions = local for zero temperature");
    }
    return build_thermo_trace(cfg.model(), cfg.initial_state(), cfg.grid(), opt);
}

bool OracleReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

OracleReport oracle_run(const ScenarioConfig& cfg)
{
    cfg.validate();
    if (std::isinf(cfg.beta)) throw ValidationError("config key 'beta': the finite-bath comparison needs a finite beta");
    const SpectralDensity J = spectral_of(cfg);
    const FiniteBathSpec spec(discretize_spectral_density(J, cfg.bath_modes, cfg.omega_max), cfg.n_max, cfg.beta);
    const FiniteBathSystem sys(spec, cfg.omega0);
    const DensityMatrix rho0 = cfg.initial_state();
    const TimeGrid grid = cfg.grid();

    std::vector<double> times = grid.points();
    std::vector<DensityMatrix> states;
    states.reserve(times.size());
    for (double t : times) states.push_back(sys.evolve(rho0, t));
    const std::vector<JointRecord> joint = global_quantities_from_joint(sys, times, states);

    const double c0 = std::abs(rho0(0, 1));
    const double s0 = von_neumann_entropy(rho0);
    OracleReport rep;
    double min_relent = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const FiniteBathAnalytic a = analytic_finite_bath(spec, times[i]);
        const DensityMatrix rho_a = analytic_state_from_eta(cfg.omega0, rho0, times[i], a.eta);
        OracleRow r;
        r.t = times[i];
        r.coherence_analytic = c0 * std::exp(-a.eta);
        r.coherence_exact = joint[i].coherence;
        r.interaction_analytic = a.interaction_energy;
        r.interaction_exact = joint[i].interaction_energy;
        r.Q_gl_exact = joint[i].Q_gl;
        r.Sigma_gl_analytic = von_neumann_entropy(rho_a) - s0 - cfg.beta * a.interaction_energy;
        r.Sigma_gl_exact = joint[i].Sigma_gl;
        r.Sigma_gl_relent = joint[i].Sigma_gl_relent;
        r.energy_residual = joint[i].energy_residual;
        min_relent = std::min(min_relent, r.Sigma_gl_relent);
        rep.rows.push_back(r);
    }

    const double tol = cfg.oracle_tol;
    auto add = [&rep, tol](std::string name, double dev) {
        rep.checks.push_back({std::move(name), dev, tol, dev <= tol});
    };
    add("coherence", max_dev(rep.rows, &OracleRow::coherence_analytic, &OracleRow::coherence_exact));
    add("interaction_energy", max_dev(rep.rows, &OracleRow::interaction_analytic, &OracleRow::interaction_exact));
    add("Q_gl", max_dev(rep.rows, &OracleRow::interaction_analytic, &OracleRow::Q_gl_exact));
    double energy = 0.0;
    for (const auto& r : rep.rows) energy = std::max(energy, std::abs(r.energy_residual));
    add("energy_conservation", energy);
    add("Sigma_gl_relent", max_dev(rep.rows, &OracleRow::Sigma_gl_exact, &OracleRow::Sigma_gl_relent));
    add("Sigma_gl_nonnegative", std::max(0.0, -min_relent));
    add("Sigma_gl", max_dev(rep.rows, &OracleRow::Sigma_gl_analytic, &OracleRow::Sigma_gl_exact));
    return rep;
}

} // namespace puredeco
