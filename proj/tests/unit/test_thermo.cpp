#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "puredeco/errors.hpp"
#include "puredeco/thermo.hpp"

using namespace puredeco;

namespace {

DensityMatrix fig1_state()
{
    Matrix m(2, 2);
    m << 0.25, 0.25, 0.25, 0.75;
    return DensityMatrix(m);
}

ModelParams fig1_model(double omega0 = 1.0)
{
    return {omega0, SpectralDensity::ohmic(1.0, 1.0), Temperature::finite(1.0)};
}

// Entropy of the example state at time t, from the series oracle.
double fig1_entropy(double t)
{
    const double eta = oracle::OhmicSeries{1.0, 1.0, 1.0}.eta(t);
    return oracle::qubit_entropy(0.25, 0.75, 0.25 * std::exp(-eta));
}

StateSeries analytic_series(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid)
{
    StateSeries s;
    for (double t : grid.points()) {
        DensityMatrix rho = analytic_state(p, rho0, t);
        Matrix rho_dot = puredeco::apply(exact_generator(p, t), rho);
        s.push_back({t, std::move(rho), std::move(rho_dot)});
    }
    return s;
}

const ThermoTrace& fig1_trace()
{
    static const ThermoTrace trace = build_thermo_trace(fig1_model(), fig1_state(), TimeGrid(20.0, 0.01));
    return trace;
}

} // namespace

TEST_SUITE("thermo") {

TEST_CASE("cumulative integral")
{
    std::vector<double> t, cubic, lin;
    for (int i = 0; i <= 40; ++i) {
        const double x = 0.05 * i;
        t.push_back(x);
        cubic.push_back(x * x * x - 2 * x + 1);
        lin.push_back(3 * x + 1);
    }
    const auto a = cumulative_integral(t, cubic);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = t[i];
        CHECK(std::abs(a[i] - (x * x * x * x / 4 - x * x + x)) < 1e-13);
    }
    const auto b = cumulative_integral(t, lin, IntegrationRule::Trapezoid);
    CHECK(std::abs(b.back() - (1.5 * 4 + 2)) < 1e-13);
    CHECK(a.front() == 0.0);

    const std::vector<double> tn{0.0, 0.1, 0.3, 0.7}, fn{1.0, 1.0, 1.0, 1.0};
    CHECK(std::abs(cumulative_integral(tn, fn).back() - 0.7) < 1e-15);
    CHECK_THROWS_AS(cumulative_integral(tn, std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("local entropy production rate vanishes for stationary states")
{
    const std::array<double, 2> p{0.3, 0.7};
    const auto rho = DensityMatrix::diagonal(p);
    const Superoperator L = generator_with_rate(1.0, 0.4);
    CHECK(std::abs(local_entropy_production_rate(L, rho, DensityMatrix::maximally_mixed(2))) < 1e-15);
}

TEST_CASE("local entropy production rate equals dS/dt in the example model")
{
    const auto p = fig1_model();
    for (double t : {0.2, 1.0, 3.0}) {
        const DensityMatrix rho = analytic_state(p, fig1_state(), t);
        const double rate = local_entropy_production_rate(exact_generator(p, t), rho, DensityMatrix::maximally_mixed(2));
        const double ds = oracle::derivative(fig1_entropy, t, 1e-3);
        CHECK(std::abs(rate - ds) < 1e-7);
        CHECK(rate > 0.0);
    }
}

TEST_CASE("the rate does not depend on which diagonal fixed point is used")
{
    const auto p = fig1_model();
    const std::array<double, 2> q{0.9, 0.1};
    const auto other = DensityMatrix::diagonal(q);
    for (double t : {0.5, 2.0}) {
        const DensityMatrix rho = analytic_state(p, fig1_state(), t);
        const Superoperator L = exact_generator(p, t);
        CHECK(std::abs(local_entropy_production_rate(L, rho, other) -
                       local_entropy_production_rate(L, rho, DensityMatrix::maximally_mixed(2))) < 1e-10);
    }
}

TEST_CASE("non-stationary reference state is rejected")
{
    const auto rho = fig1_state();
    CHECK_THROWS_AS(local_entropy_production_rate(generator_with_rate(1.0, 0.3), rho, fig1_state()), ValidationError);
}

TEST_CASE("rank-deficient states need explicit regularization")
{
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const DensityMatrix rho(plus);
    const Superoperator L = generator_with_rate(1.0, 0.3);
    CHECK_THROWS_WITH_AS(local_entropy_production_rate(L, rho, DensityMatrix::maximally_mixed(2)),
                         doctest::Contains("regularization"), DomainError);
    EntropyOptions opt;
    opt.regularize = true;
    const double r = local_entropy_production_rate(L, rho, DensityMatrix::maximally_mixed(2), opt);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
}

TEST_CASE("integrated local entropy production matches the entropy change")
{
    const auto p = fig1_model();
    const TimeGrid grid(10.0, 0.01);
    const auto series = analytic_series(p, fig1_state(), grid);
    const GeneratorFn gen = [&p](double t) { return exact_generator(p, t); };
    const auto ent = local_entropy_production(series, gen, ifp_from_kernel());
    REQUIRE(ent.endpoint_integral.has_value());
    CHECK(ent.consistency_gap < 1e-6);
    for (std::size_t i = 0; i < grid.size(); i += 100) {
        CHECK(std::abs(ent.integral[i] - (fig1_entropy(grid[i]) - fig1_entropy(0.0))) < 1e-6);
    }
    // a coarse grid with plain trapezoid misses the endpoint identity
    const TimeGrid coarse(4.0, 0.2);
    const auto cs = analytic_series(p, fig1_state(), coarse);
    CHECK_THROWS_AS(local_entropy_production(cs, gen, ifp_from_kernel(), {}, 1e-9), NumericalError);
}

TEST_CASE("example trace: local quantities")
{
    const auto& tr = fig1_trace();
    const double s0 = oracle::qubit_entropy(0.25, 0.75, 0.25);
    const double s_inf = oracle::qubit_entropy(0.25, 0.75, 0.0);
    CHECK(std::abs(tr.records.front().Sigma_loc) == 0.0);
    CHECK(std::abs(tr.records.back().Sigma_loc - (fig1_entropy(20.0) - s0)) < 1e-6);
    CHECK(std::abs(tr.records.back().Sigma_loc - (s_inf - s0)) < 1e-3);
    CHECK(tr.records.back().Sigma_loc == doctest::Approx(0.1458).epsilon(1e-3));
    double prev = -1.0;
    for (const auto& r : tr.records) {
        CHECK(r.Sigma_loc >= prev - 1e-12);
        prev = r.Sigma_loc;
        CHECK(std::abs(r.U_loc - 0.25) < 1e-12);
        CHECK(std::abs(r.W_loc) < 1e-12);
        CHECK(std::abs(r.Q_loc) < 1e-12);
        CHECK(std::abs(r.S - fig1_entropy(r.t)) < 1e-8);
    }
    CHECK(tr.entropy_consistency_gap < 1e-6);
}

TEST_CASE("example trace: global quantities")
{
    const auto& tr = fig1_trace();
    const auto& r0 = tr.records.front();
    CHECK(r0.Q_gl == 0.0);
    CHECK(r0.Sigma_gl == 0.0);
    CHECK(r0.W_lp == 0.0);
    for (const auto& r : tr.records) {
        const double hi = -2.0 * r.t * r.t / (1.0 + r.t * r.t);
        CHECK(std::abs(r.Q_gl - hi) < 1e-8);
        CHECK(r.Sigma_gl >= r.Sigma_loc - 1e-12);
        CHECK(std::abs((r.U_elb - r0.U_elb) - r.W_elb - r.Q_gl) <= 1e-10);
        CHECK(std::abs((r.U_lp - r0.U_lp) - r.W_lp - r.Q_gl) <= 1e-10);
        CHECK(r.W_elb == 0.0);
        CHECK(std::abs(r.U_lp - 0.25) < 1e-12);
    }
    const auto& r1 = tr.records[100];
    CHECK(r1.t == doctest::Approx(1.0));
    CHECK(std::abs(r1.Q_gl + 1.0) < 1e-8);
    CHECK(std::abs(tr.records.back().W_lp - 800.0 / 401.0) < 1e-8);
    CHECK(tr.elb_closure_residual <= 1e-10);
    CHECK(tr.lp_closure_residual <= 1e-10);
}

TEST_CASE("global heat does not depend on the qubit splitting")
{
    const TimeGrid grid(5.0, 0.05);
    const auto a = build_thermo_trace(fig1_model(1.0), fig1_state(), grid);
    const auto b = build_thermo_trace(fig1_model(3.0), fig1_state(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.records[i].Q_gl == b.records[i].Q_gl);
        CHECK(std::abs(a.records[i].Sigma_gl - b.records[i].Sigma_gl) < 1e-12);
    }
}

TEST_CASE("diagonal initial state produces no entropy or heat locally")
{
    const std::array<double, 2> p{0.4, 0.6};
    const auto tr = build_thermo_trace(fig1_model(), DensityMatrix::diagonal(p), TimeGrid(5.0, 0.05));
    for (const auto& r : tr.records) {
        CHECK(std::abs(r.sigma_loc) < 1e-15);
        CHECK(std::abs(r.Sigma_loc) < 1e-15);
        CHECK(std::abs(r.Q_loc) < 1e-15);
        // globally the interaction energy still flows
        CHECK(r.Sigma_gl == doctest::Approx(-r.Q_gl));
    }
}

TEST_CASE("integrated and analytic sources agree")
{
    const TimeGrid grid(5.0, 0.05);
    TraceOptions opt;
    opt.source = StateSource::Integrated;
    opt.integrator_step = 1e-3;
    const auto a = build_thermo_trace(fig1_model(), fig1_state(), grid);
    const auto b = build_thermo_trace(fig1_model(), fig1_state(), grid, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(a.records[i].S - b.records[i].S) < 1e-8);
        CHECK(std::abs(a.records[i].Sigma_loc - b.records[i].Sigma_loc) < 1e-7);
        CHECK(std::abs(a.records[i].Sigma_gl - b.records[i].Sigma_gl) < 1e-8);
    }
    opt.integrator_step = 0.03;
    CHECK_THROWS_AS(build_thermo_trace(fig1_model(), fig1_state(), grid, opt), ValidationError);
}

TEST_CASE("global quantities need a finite temperature")
{
    ModelParams p = fig1_model();
    p.temperature = Temperature::zero();
    const TimeGrid grid(1.0, 0.1);
    CHECK_THROWS_AS(build_thermo_trace(p, fig1_state(), grid), UnsupportedError);
    TraceOptions opt;
    opt.conventions = {true, false, false};
    const auto tr = build_thermo_trace(p, fig1_state(), grid, opt);
    CHECK(std::isnan(tr.records.back().Q_gl));
    CHECK(std::isnan(tr.records.back().W_lp));
    CHECK(std::isfinite(tr.records.back().Sigma_loc));
}

TEST_CASE("check_first_law flags a broken ledger")
{
    ThermoTrace tr = build_thermo_trace(fig1_model(), fig1_state(), TimeGrid(1.0, 0.1));
    CHECK_NOTHROW(check_first_law(tr));
    tr.records[5].W_lp += 1e-6;
    CHECK_THROWS_AS(check_first_law(tr), NumericalError);
    tr.records[5].W_lp -= 1e-6;
    tr.local_closure_residual = 1e-7;
    CHECK_THROWS_AS(check_first_law(tr), NumericalError);
}

TEST_CASE("random time-independent dephasing: no heat, constant energy")
{
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_dephasing(rng, 3);
        Matrix h = Matrix::Zero(3, 3);
        for (int k = 0; k < 3; ++k) h(k, k) = d.energies[static_cast<std::size_t>(k)];
        std::vector<LindbladTerm> terms;
        for (std::size_t a = 0; a < d.ops.size(); ++a) {
            Matrix l = Matrix::Zero(3, 3);
            for (int k = 0; k < 3; ++k) l(k, k) = d.ops[a][static_cast<std::size_t>(k)];
            terms.push_back({d.rates[a], l});
        }
        const Superoperator L = build_superoperator(h, terms);
        const Matrix K = to_minimal_dissipation(h, terms).hamiltonian;
        const Matrix rho0 = oracle::random_state(rng, 3);
        StateSeries series;
        for (int i = 0; i <= 2000; ++i) {
            const double t = 0.001 * i;
            const Matrix r = oracle::dephasing_evolve(d, rho0, t);
            series.push_back({t, DensityMatrix(r), oracle::dephasing_rhs(d, r)});
        }
        const auto fl = local_first_law([&K](double) { return K; }, series);
        for (std::size_t i = 0; i < series.size(); ++i) {
            CHECK(std::abs(fl.heat[i]) < 1e-12);
            CHECK(std::abs(fl.work[i]) < 1e-12);
            CHECK(std::abs(fl.energy[i] - fl.energy[0]) < 1e-12);
        }
        CHECK(fl.closure_residual < 1e-12);

        // entropy production: fixed point I/3 gives σ = dS/dt, accumulated to ΔS
        const GeneratorFn gen = [&L](double) { return L; };
        const auto ent = local_entropy_production(series, gen, ifp_fixed(DensityMatrix::maximally_mixed(3)));
        CHECK(std::abs(ent.integral.back() - (oracle::entropy(series.back().rho.matrix()) - oracle::entropy(rho0))) <
              1e-6);
        for (double r : ent.rate) CHECK(r >= -1e-12);

        const auto cl = clausius_variants(series, fl, 1.0, [&K](double) { return K; }, gen,
                                          ifp_fixed(DensityMatrix::maximally_mixed(3)));
        for (std::size_t i = 0; i < series.size(); ++i) CHECK(std::abs(cl.sigma_cl[i] - ent.rate[i]) < 1e-10);
    }
}

TEST_CASE("renormalized inverse temperature")
{
    const double beta = 0.8, w = 1.7;
    const Matrix K = system_hamiltonian(w);
    const double z = 2.0 * std::cosh(beta * w / 2);
    const std::array<double, 2> p{std::exp(beta * w / 2) / z, std::exp(-beta * w / 2) / z};
    const auto b = renormalized_beta(K, DensityMatrix::diagonal(p));
    REQUIRE(b.has_value());
    CHECK(std::abs(*b - beta) < 1e-6);

    const auto zero = renormalized_beta(K, DensityMatrix::maximally_mixed(2));
    REQUIRE(zero.has_value());
    CHECK(std::abs(*zero) < 1e-12);

    CHECK(!renormalized_beta(Matrix::Identity(2, 2), DensityMatrix::maximally_mixed(2)).has_value());
    CHECK(!renormalized_beta(K, fig1_state()).has_value());

    // qutrit off the Gibbs family
    Matrix k3 = Matrix::Zero(3, 3);
    k3(0, 0) = -1.0;
    k3(2, 2) = 1.0;
    const std::array<double, 3> q{0.5, 0.1, 0.4};
    CHECK(!renormalized_beta(k3, DensityMatrix::diagonal(q)).has_value());
}

} // TEST_SUITE
