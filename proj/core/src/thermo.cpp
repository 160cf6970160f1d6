// thermo.cpp: Local and global thermodynamic ledgers

#include "puredeco/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

double trace_product(const Matrix& a, const Matrix& b)
{
    // Re Tr{AB} without forming the product.
    return (a.transpose().cwiseProduct(b)).sum().real();
}

Matrix log_for_entropy(const DensityMatrix& rho, const EntropyOptions& opt, const char* what)
{
    if (!opt.regularize) {
        try {
            return log_state(rho);
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << what << " is rank deficient (" << e.what() << "); enable epsilon-regularization to proceed";
            throw DomainError(os.str());
        }
    }
    const Eigen::Index n = rho.dim();
    const Matrix reg = (1.0 - opt.epsilon) * rho.matrix() +
                       (opt.epsilon / static_cast<double>(n)) * Matrix::Identity(n, n);
    return log_state(DensityMatrix::normalized(reg), 0.0);
}

void require_fixed_point(const Superoperator& L, const DensityMatrix& ifp, double tol)
{
    if (ifp.dim() != L.dim()) throw ValidationError("fixed point dimension does not match the generator");
    const double defect = max_abs(puredeco::apply(L, ifp));
    const double scale = std::max(1.0, max_abs(L.matrix()));
    if (defect > tol * scale) {
        std::ostringstream os;
        os << "reference state is not a fixed point of the generator: |L[rho*]| = " << defect;
        throw ValidationError(os.str());
    }
}

bool uniform_spacing(std::span<const double> t)
{
    if (t.size() < 3) return false;
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (std::abs((t[i + 1] - t[i]) - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
    }
    return true;
}

std::vector<double> times_of(const StateSeries& series)
{
    std::vector<double> t(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) t[i] = series[i].t;
    return t;
}

void require_series(const StateSeries& series)
{
    if (series.empty()) throw ValidationError("empty state series");
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (!(series[i].t > series[i - 1].t)) throw ValidationError("state series times must be strictly increasing");
    }
}

double entropy_rate(const StatePoint& p, const EntropyOptions& opt)
{
    return -trace_product(p.rho_dot, log_for_entropy(p.rho, opt, "rho"));
}

} // namespace

StateSeries attach_derivatives(const Trajectory& traj, const GeneratorFn& generator)
{
    StateSeries out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back({s.t, s.rho, puredeco::apply(generator(s.t), s.rho)});
    return out;
}

std::vector<double> cumulative_integral(std::span<const double> t, std::span<const double> f, IntegrationRule rule)
{
    if (t.size() != f.size()) throw ValidationError("cumulative_integral: size mismatch");
    std::vector<double> out(t.size(), 0.0);
    if (t.size() < 2) return out;

    const bool cubic = rule == IntegrationRule::CubicCorrected && t.size() >= 4 && uniform_spacing(t);
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = t[i + 1] - t[i];
        double piece;
        if (!cubic) {
            piece = 0.5 * h * (f[i] + f[i + 1]);
        } else if (i == 0) {
            piece = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (i + 2 == n) {
            piece = h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
        } else {
            piece = h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        }
        out[i + 1] = out[i] + piece;
    }
    return out;
}

double local_entropy_production_rate(const Superoperator& L, const DensityMatrix& rho, const DensityMatrix& ifp,
                                     const EntropyOptions& opt)
{
    if (rho.dim() != L.dim()) throw ValidationError("state dimension does not match the generator");
    require_fixed_point(L, ifp, opt.ifp_tol);
    const Matrix rho_dot = puredeco::apply(L, rho);
    const Matrix ln_rho = log_for_entropy(rho, opt, "rho");
    const Matrix ln_ifp = log_for_entropy(ifp, opt, "fixed point");
    return -trace_product(rho_dot, ln_rho) + trace_product(rho_dot, ln_ifp);
}

IfpPolicy ifp_from_kernel(double tol)
{
    return [tol](double, const Superoperator& L) { return instantaneous_fixed_points(L, tol).states.front(); };
}

IfpPolicy ifp_fixed(DensityMatrix state)
{
    return [state = std::move(state)](double, const Superoperator&) { return state; };
}

LocalEntropySeries local_entropy_production(const StateSeries& series, const GeneratorFn& generator,
                                            const IfpPolicy& policy, const EntropyOptions& opt,
                                            double consistency_tol)
{
    require_series(series);
    LocalEntropySeries out;
    out.t = times_of(series);
    out.entropy.reserve(series.size());
    out.rate.reserve(series.size());

    std::vector<DensityMatrix> ifps;
    ifps.reserve(series.size());
    bool constant = true;
    for (const auto& p : series) {
        const Superoperator L = generator(p.t);
        ifps.push_back(policy(p.t, L));
        if (max_abs(ifps.back().matrix() - ifps.front().matrix()) > 1e-12) constant = false;
        out.rate.push_back(local_entropy_production_rate(L, p.rho, ifps.back(), opt));
        out.entropy.push_back(von_neumann_entropy(p.rho));
    }
    out.integral = cumulative_integral(out.t, out.rate);

    if (constant) {
        const DensityMatrix& ref = ifps.front();
        const double d0 = relative_entropy(series.front().rho, ref);
        std::vector<double> endpoint(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            endpoint[i] = d0 - relative_entropy(series[i].rho, ref);
            out.consistency_gap = std::max(out.consistency_gap, std::abs(endpoint[i] - out.integral[i]));
        }
        out.endpoint_integral = std::move(endpoint);
        if (out.consistency_gap > consistency_tol) {
            std::ostringstream os;
            os << "accumulated entropy production disagrees with the endpoint identity by " << out.consistency_gap
               << " (tolerance " << consistency_tol << "); refine the time grid";
            throw NumericalError(os.str());
        }
    }
    return out;
}

FirstLawSeries local_first_law(const OperatorFn& energy_operator, const StateSeries& series,
                               const OperatorFn& energy_operator_rate)
{
    require_series(series);
    FirstLawSeries out;
    out.t = times_of(series);

    auto k_dot = [&](double t) -> Matrix {
        if (energy_operator_rate) return energy_operator_rate(t);
        const double d = 1e-5 * std::max(1.0, std::abs(t));
        if (t - d < series.front().t) {
            return (-3.0 * energy_operator(t) + 4.0 * energy_operator(t + d) - energy_operator(t + 2.0 * d)) /
                   (2.0 * d);
        }
        return (energy_operator(t + d) - energy_operator(t - d)) / (2.0 * d);
    };

    for (const auto& p : series) {
        const Matrix K = energy_operator(p.t);
        require_hermitian(K, "energy operator K(t)", 1e-10);
        out.energy.push_back(trace_product(K, p.rho.matrix()));
        out.heat_rate.push_back(trace_product(K, p.rho_dot));
        out.work_rate.push_back(trace_product(k_dot(p.t), p.rho.matrix()));
    }
    out.work = cumulative_integral(out.t, out.work_rate);
    out.heat = cumulative_integral(out.t, out.heat_rate);
    for (std::size_t i = 0; i < out.t.size(); ++i) {
        const double du = out.energy[i] - out.energy.front();
        out.closure_residual = std::max(out.closure_residual, std::abs(du - out.work[i] - out.heat[i]));
    }
    return out;
}

std::optional<double> renormalized_beta(const Matrix& K, const DensityMatrix& ifp, double residual_tol)
{
    if (K.rows() != ifp.dim()) throw ValidationError("energy operator and fixed point dimensions differ");
    const HermitianEigen e = eig_hermitian(K, 1e-10);
    const Eigen::Index n = e.values.size();
    const double spread = e.values(n - 1) - e.values(0);
    if (spread <= 1e-12 * std::max(1.0, e.values.cwiseAbs().maxCoeff())) return std::nullopt;
    if (max_abs(commutator(K, ifp.matrix())) > residual_tol) return std::nullopt;

    std::vector<double> lnp(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double p = (e.vectors.col(i).adjoint() * ifp.matrix() * e.vectors.col(i))(0, 0).real();
        if (!(p > 0.0)) return std::nullopt;
        lnp[static_cast<std::size_t>(i)] = std::log(p);
    }
    // ln p_i = −β_r k_i + c
    double mk = 0.0, ml = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        mk += e.values(i);
        ml += lnp[static_cast<std::size_t>(i)];
    }
    mk /= static_cast<double>(n);
    ml /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dk = e.values(i) - mk;
        sxy += dk * (lnp[static_cast<std::size_t>(i)] - ml);
        sxx += dk * dk;
    }
    const double beta_r = -sxy / sxx;

    const Matrix gibbs_unnorm = hermitian_function(K, [beta_r](double k) { return std::exp(-beta_r * k); });
    const Matrix gibbs = gibbs_unnorm / gibbs_unnorm.trace().real();
    if (max_abs(gibbs - ifp.matrix()) > residual_tol) return std::nullopt;
    return beta_r;
}

ClausiusSeries clausius_variants(const StateSeries& series, const FirstLawSeries& first_law, double beta,
                                 const OperatorFn& energy_operator, const GeneratorFn& generator,
                                 const IfpPolicy& policy, const EntropyOptions& opt)
{
    require_series(series);
    if (first_law.heat_rate.size() != series.size()) {
        throw ValidationError("first-law series does not match the state series");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and > 0");
    ClausiusSeries out;
    out.sigma_cl.reserve(series.size());
    out.beta_r.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& p = series[i];
        out.sigma_cl.push_back(entropy_rate(p, opt) - beta * first_law.heat_rate[i]);
        const Superoperator L = generator(p.t);
        const DensityMatrix ifp = policy(p.t, L);
        require_fixed_point(L, ifp, opt.ifp_tol);
        out.beta_r.push_back(renormalized_beta(energy_operator(p.t), ifp));
    }
    return out;
}

GlobalSeries global_quantities(std::span<const double> interaction, const Temperature& T, const StateSeries& series)
{
    require_series(series);
    if (interaction.size() != series.size()) throw ValidationError("interaction energies do not match the series");
    if (T.is_zero()) throw UnsupportedError("global entropy production needs a finite temperature");
    const double beta = T.beta();
    GlobalSeries out;
    out.t = times_of(series);
    const double s0 = von_neumann_entropy(series.front().rho);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double q = interaction[i];
        out.heat.push_back(q);
        out.entropy_production.push_back(von_neumann_entropy(series[i].rho) - s0 - beta * q);
    }
    return out;
}

GlobalSeries global_quantities(const SpectralDensity& J, const Temperature& T, const StateSeries& series,
                               const SpectralOptions& opt)
{
    if (T.is_zero()) throw UnsupportedError("global entropy production needs a finite temperature");
    std::vector<double> hi;
    hi.reserve(series.size());
    for (const auto& p : series) hi.push_back(interaction_energy(J, p.t, opt));
    return global_quantities(hi, T, series);
}

GlobalFirstLaw global_first_law(double omega0, std::span<const double> interaction, const GlobalSeries& global,
                                const StateSeries& series, GlobalConvention convention)
{
    require_series(series);
    if (interaction.size() != series.size() || global.heat.size() != series.size()) {
        throw ValidationError("global first law: series lengths differ");
    }
    const Matrix hs = system_hamiltonian(omega0);
    if (series.front().rho.dim() != hs.rows()) throw ValidationError("global first law is defined for the qubit model");

    GlobalFirstLaw out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double es = trace_product(hs, series[i].rho.matrix());
        if (convention == GlobalConvention::ELB) {
            out.energy.push_back(es + interaction[i]);
            out.work.push_back(0.0);
        } else {
            out.energy.push_back(es);
            out.work.push_back(interaction.front() - interaction[i]);
        }
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double du = out.energy[i] - out.energy.front();
        out.closure_residual = std::max(out.closure_residual, std::abs(du - out.work[i] - global.heat[i]));
    }
    if (out.closure_residual > kGlobalClosureTol) {
        std::ostringstream os;
        os << (convention == GlobalConvention::ELB ? "ELB" : "LP") << " first law does not close: residual "
           << out.closure_residual;
        throw NumericalError(os.str());
    }
    return out;
}

namespace {

struct FineSeries {
    TimeGrid grid;
    std::vector<BathIntegrals> bath;
    std::shared_ptr<const RateTable> rates;
    StateSeries series;
    std::string note;
};

FineSeries model_series(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid, const TraceOptions& opt)
{
    const std::size_t n = grid.size();
    FineSeries out{grid, std::vector<BathIntegrals>(n), nullptr, {}, {}};
    for (std::size_t i = 0; i < n; ++i) out.bath[i] = bath_integrals(p.spectral, p.temperature, grid[i], opt.spectral);

    std::vector<double> gamma(n), gamma_dot(n);
    for (std::size_t i = 0; i < n; ++i) {
        gamma[i] = out.bath[i].gamma;
        gamma_dot[i] = out.bath[i].gamma_dot;
    }
    out.rates = std::make_shared<const RateTable>(grid.step(), gamma, gamma_dot);

    out.series.reserve(n);
    if (opt.source == StateSource::Analytic) {
        for (std::size_t i = 0; i < n; ++i) {
            DensityMatrix rho = analytic_state_from_eta(p.omega0, rho0, grid[i], out.bath[i].eta);
            Matrix rho_dot = puredeco::apply(generator_with_rate(p.omega0, gamma[i]), rho);
            out.series.push_back({grid[i], std::move(rho), std::move(rho_dot)});
        }
        out.note = "states from the closed-form solution";
    } else {
        const double sub = std::max(1.0, std::round(grid.step() / opt.integrator_step));
        const TimeGrid fine(grid.t_end(), grid.step() / sub);
        IntegratorOptions io;
        io.record_every = static_cast<std::size_t>(sub);
        const GeneratorFn generator = model_generator(p.omega0, out.rates);
        const Trajectory traj = integrate_tcl(generator, rho0, fine, io);
        if (traj.samples.size() != n) throw NumericalError("integrator output does not match the time grid");
        out.series = attach_derivatives(traj, generator);
        std::ostringstream os;
        os << "states from RK4 integration, step " << fine.step() << ", max trace drift " << traj.max_trace_drift;
        out.note = os.str();
    }
    return out;
}

constexpr std::size_t kMaxRefinement = 64;

} // namespace

ThermoTrace build_thermo_trace(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                               const TraceOptions& opt)
{
    if (rho0.dim() != 2) throw ValidationError("the dephasing model acts on a 2x2 density matrix");
    if (opt.source == StateSource::Integrated) {
        const double ratio = grid.step() / opt.integrator_step;
        const double sub = std::max(1.0, std::round(ratio));
        if (std::abs(sub - ratio) > 1e-9 * ratio && ratio > 1.0) {
            throw ValidationError("integrator step must divide the output step");
        }
    }
    if (opt.conventions.elb || opt.conventions.lp) {
        if (p.temperature.is_zero()) throw UnsupportedError("global entropy production needs a finite temperature");
    }

    ThermoTrace trace;
    trace.params = p;
    trace.conventions = opt.conventions;

    // The running integrals are accumulated on a grid fine enough for the
    // endpoint identity to hold; records are sampled back onto `grid`.
    std::size_t refine = 1;
    FineSeries fine = model_series(p, rho0, grid, opt);
    GeneratorFn generator = model_generator(p.omega0, fine.rates);
    std::optional<LocalEntropySeries> ent;
    if (opt.conventions.local) {
        const double inf = std::numeric_limits<double>::infinity();
        for (;;) {
            ent = local_entropy_production(fine.series, generator, ifp_from_kernel(), opt.entropy, inf);
            if (ent->consistency_gap <= kEntropyConsistencyTol || refine >= kMaxRefinement) break;
            refine *= 2;
            fine = model_series(p, rho0, TimeGrid(grid.t_end(), grid.step() / static_cast<double>(refine)), opt);
            generator = model_generator(p.omega0, fine.rates);
        }
        if (!(ent->consistency_gap <= kEntropyConsistencyTol)) {
            std::ostringstream os;
            os << "accumulated entropy production disagrees with the endpoint identity by " << ent->consistency_gap
               << " (tolerance " << kEntropyConsistencyTol << ") after refining the grid " << refine
               << "x; refine the time grid";
            throw NumericalError(os.str());
        }
    }
    trace.notes.push_back(fine.note);
    if (refine > 1) {
        std::ostringstream os;
        os << "running integrals accumulated on a " << refine << "x refined grid (step " << fine.grid.step() << ")";
        trace.notes.push_back(os.str());
    }

    const StateSeries& series = fine.series;
    const std::size_t n = grid.size();
    auto at = [refine](std::size_t i) { return i * refine; };
    trace.records.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        trace.records[i].t = grid[i];
        trace.records[i].S = von_neumann_entropy(series[at(i)].rho);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (opt.conventions.local) {
        trace.entropy_consistency_gap = ent->consistency_gap;
        auto K = [&generator](double t) { return effective_hamiltonian(generator(t)); };
        auto rates = fine.rates;
        auto K_dot = [rates](double t) { return effective_hamiltonian(generator_with_rate(0.0, rates->derivative(t))); };
        const FirstLawSeries fl = local_first_law(K, series, K_dot);
        trace.local_closure_residual = fl.closure_residual;
        for (std::size_t i = 0; i < n; ++i) {
            auto& r = trace.records[i];
            r.sigma_loc = ent->rate[at(i)];
            r.Sigma_loc = ent->integral[at(i)];
            r.U_loc = fl.energy[at(i)];
            r.W_loc = fl.work[at(i)];
            r.Q_loc = fl.heat[at(i)];
        }
        trace.notes.push_back("local: fixed point from the generator kernel; K from the minimal-dissipation form");
    } else {
        for (auto& r : trace.records) r.sigma_loc = r.Sigma_loc = r.U_loc = r.W_loc = r.Q_loc = nan;
    }

    const bool global = opt.conventions.elb || opt.conventions.lp;
    if (global) {
        // Pointwise quantities: evaluated on the output grid only.
        std::vector<double> interaction(n);
        StateSeries coarse;
        coarse.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            interaction[i] = fine.bath[at(i)].interaction_energy;
            coarse.push_back(series[at(i)]);
        }
        const GlobalSeries gs = global_quantities(interaction, p.temperature, coarse);
        for (std::size_t i = 0; i < n; ++i) {
            trace.records[i].Q_gl = gs.heat[i];
            trace.records[i].Sigma_gl = gs.entropy_production[i];
        }
        if (opt.conventions.elb) {
            const GlobalFirstLaw g = global_first_law(p.omega0, interaction, gs, coarse, GlobalConvention::ELB);
            trace.elb_closure_residual = g.closure_residual;
            for (std::size_t i = 0; i < n; ++i) {
                trace.records[i].U_elb = g.energy[i];
                trace.records[i].W_elb = g.work[i];
            }
        }
        if (opt.conventions.lp) {
            const GlobalFirstLaw g = global_first_law(p.omega0, interaction, gs, coarse, GlobalConvention::LP);
            trace.lp_closure_residual = g.closure_residual;
            for (std::size_t i = 0; i < n; ++i) {
                trace.records[i].U_lp = g.energy[i];
                trace.records[i].W_lp = g.work[i];
            }
        }
    } else {
        for (auto& r : trace.records) r.Q_gl = r.Sigma_gl = nan;
    }
    if (!opt.conventions.elb) {
        for (auto& r : trace.records) r.U_elb = r.W_elb = nan;
    }
    if (!opt.conventions.lp) {
        for (auto& r : trace.records) r.U_lp = r.W_lp = nan;
    }

    check_first_law(trace);
    return trace;
}

void check_first_law(const ThermoTrace& trace, double tol)
{
    auto fail = [](const char* which, double residual) {
        std::ostringstream os;
        os << which << " first law does not close: residual " << residual;
        throw NumericalError(os.str());
    };
    if (trace.conventions.local && !(trace.local_closure_residual <= tol)) fail("local", trace.local_closure_residual);
    if (trace.conventions.elb && !(trace.elb_closure_residual <= tol)) fail("ELB", trace.elb_closure_residual);
    if (trace.conventions.lp && !(trace.lp_closure_residual <= tol)) fail("LP", trace.lp_closure_residual);
    if (trace.records.empty()) return;
    const ThermoRecord& r0 = trace.records.front();
    for (const auto& r : trace.records) {
        const double elb = std::abs((r.U_elb - r0.U_elb) - r.W_elb - r.Q_gl);
        const double lp = std::abs((r.U_lp - r0.U_lp) - r.W_lp - r.Q_gl);
        if (trace.conventions.elb && !(elb <= tol)) fail("ELB", elb);
        if (trace.conventions.lp && !(lp <= tol)) fail("LP", lp);
    }
}

} // namespace puredeco
