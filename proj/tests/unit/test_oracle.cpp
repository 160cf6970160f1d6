#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "puredeco/errors.hpp"
#include "puredeco/oracle.hpp"

using namespace puredeco;

namespace {

DensityMatrix fig1_state()
{
    Matrix m(2, 2);
    m << 0.25, 0.25, 0.25, 0.75;
    return DensityMatrix(m);
}

FiniteBathSpec small_bath(int n_max = 8)
{
    return FiniteBathSpec(discretize_spectral_density(SpectralDensity::ohmic(0.02, 1.0), 2, 6.0), n_max, 2.0);
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("discretization")
{
    const auto J = SpectralDensity::ohmic(1.0, 1.0);
    const auto one = discretize_spectral_density(J, 1, 2.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].omega == doctest::Approx(1.0));
    CHECK(std::norm(one[0].g) == doctest::Approx(2.0 * J(1.0)));

    const auto many = discretize_spectral_density(J, 64, 30.0);
    double total = 0.0;
    for (const auto& m : many) total += std::norm(m.g);
    CHECK(std::abs(total - 1.0) < 1e-8);  // ∫ J = αΩ²
    for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i].omega > many[i - 1].omega);
}

TEST_CASE("discretized eta converges to the continuum integral")
{
    const auto J = SpectralDensity::ohmic(1.0, 1.0);
    const auto modes = discretize_spectral_density(J, 64, 30.0);
    const double beta = 1.0;
    const oracle::OhmicSeries ref{1.0, 1.0, beta};
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(analytic_finite_bath(modes, beta, t).eta - ref.eta(t)) < 1e-4);
    }
    const double hi = analytic_finite_bath(modes, beta, 1.0).interaction_energy;
    CHECK(std::abs(hi + 1.0) < 1e-4);
}

TEST_CASE("single-mode analytic values")
{
    const std::vector<BathMode> mode{{2.0, 1.0}};
    const double t = std::numbers::pi / 2;  // 1 − cos ωt = 2
    const auto a = analytic_finite_bath(mode, 1.0, t);
    CHECK(std::abs(a.eta - 1.0 / std::tanh(1.0)) < 1e-14);
    CHECK(std::abs(a.interaction_energy + 2.0) < 1e-14);
    CHECK(analytic_finite_bath(mode, 1.0, 0.0).eta == 0.0);
}

TEST_CASE("bath validation and truncation tail")
{
    CHECK(FiniteBathSpec::thermal_tail(1.0, 2.0, 8) == doctest::Approx(std::exp(-16.0)));
    CHECK(small_bath().joint_dim() == 128);
    CHECK_THROWS_AS(FiniteBathSpec({{1.0, 0.1}}, 2, 0.2), ValidationError);
    CHECK_THROWS_AS(FiniteBathSpec({{-1.0, 0.1}}, 8, 2.0), ValidationError);
    CHECK_THROWS_AS(FiniteBathSpec({{1.0, 0.1}}, 1, 2.0), ValidationError);
    // 2·10⁴ > 4096
    std::vector<BathMode> four(4, BathMode{3.0, 0.01});
    CHECK_THROWS_AS(FiniteBathSystem(FiniteBathSpec(four, 10, 2.0), 1.0), ValidationError);
}

TEST_CASE("joint evolution: initial product state and conserved populations")
{
    const FiniteBathSystem sys(small_bath(), 1.0);
    const DensityMatrix r0 = sys.initial_state(fig1_state());
    CHECK(max_abs(r0.matrix() - kron(fig1_state().matrix(), sys.bath_gibbs())) < 1e-15);
    CHECK(max_abs(sys.reduce_to_system(sys.evolve(fig1_state(), 0.0)).matrix() - fig1_state().matrix()) < 1e-12);
    for (double t : {1.0, 4.0}) {
        const DensityMatrix r = sys.reduce_to_system(sys.evolve(fig1_state(), t));
        CHECK(std::abs(r(0, 0).real() - 0.25) < 1e-12);
        CHECK(std::abs(r(1, 1).real() - 0.75) < 1e-12);
    }
    const std::array<double, 2> p{0.4, 0.6};
    const auto diag = DensityMatrix::diagonal(p);
    CHECK(max_abs(sys.reduce_to_system(sys.evolve(diag, 3.0)).matrix() - diag.matrix()) < 1e-12);
}

TEST_CASE("joint coherence decays as exp(-2 eta_K)")
{
    const auto spec = small_bath();
    const FiniteBathSystem sys(spec, 1.0);
    for (double t : {0.5, 2.0, 5.0, 9.0}) {
        const DensityMatrix r = sys.reduce_to_system(sys.evolve(fig1_state(), t));
        const double eta = analytic_finite_bath(spec, t).eta;
        CHECK(std::abs(std::abs(r(0, 1)) - 0.25 * std::exp(-2.0 * eta)) < 1e-6);
    }
}

TEST_CASE("joint records: interaction energy, heat, entropy production")
{
    const auto spec = small_bath();
    const FiniteBathSystem sys(spec, 1.0);
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    for (int i = 0; i <= 20; ++i) {
        times.push_back(0.5 * i);
        states.push_back(sys.evolve(fig1_state(), 0.5 * i));
    }
    const auto rec = global_quantities_from_joint(sys, times, states);
    REQUIRE(rec.size() == times.size());
    CHECK(rec[0].Q_gl == 0.0);
    CHECK(std::abs(rec[0].Sigma_gl_relent) < 1e-12);
    const double purity0 = rec[0].purity;
    for (const auto& r : rec) {
        const auto a = analytic_finite_bath(spec, r.t);
        CHECK(std::abs(r.interaction_energy - a.interaction_energy) < 1e-6);
        CHECK(std::abs(r.Q_gl - r.interaction_energy) < 1e-6);
        CHECK(std::abs(r.energy_residual) < 1e-12);
        CHECK(std::abs(r.purity - purity0) < 1e-12);
        CHECK(r.Sigma_gl_relent >= -1e-12);
        CHECK(std::abs(r.Sigma_gl - r.Sigma_gl_relent) < 1e-6);
    }
}

TEST_CASE("truncation converges")
{
    const FiniteBathSystem a(small_bath(8), 1.0);
    const FiniteBathSystem b(small_bath(10), 1.0);
    for (double t : {1.0, 6.0}) {
        const Matrix ra = a.reduce_to_system(a.evolve(fig1_state(), t)).matrix();
        const Matrix rb = b.reduce_to_system(b.evolve(fig1_state(), t)).matrix();
        CHECK(max_abs(ra - rb) < 1e-7);
    }
}

TEST_CASE("finite_bath_evolve matches the system object")
{
    const auto spec = small_bath();
    const FiniteBathSystem sys(spec, 1.0);
    CHECK(max_abs(finite_bath_evolve(spec, 1.0, fig1_state(), 2.5).matrix() -
                  sys.evolve(fig1_state(), 2.5).matrix()) < 1e-14);
}

} // TEST_SUITE
