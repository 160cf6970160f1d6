#include <benchmark/benchmark.h>

#include <memory>

#include "puredeco/dephasing.hpp"
#include "puredeco/oracle.hpp"
#include "puredeco/thermo.hpp"

using namespace puredeco;

namespace {

DensityMatrix example_state()
{
    Matrix m(2, 2);
    m << 0.25, 0.25, 0.25, 0.75;
    return DensityMatrix(m);
}

ModelParams example_model()
{
    return {1.0, SpectralDensity::ohmic(1.0, 1.0), Temperature::finite(1.0)};
}

void BM_BathIntegrals(benchmark::State& state)
{
    const auto p = example_model();
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bath_integrals(p.spectral, p.temperature, t));
}
BENCHMARK(BM_BathIntegrals)->Arg(1)->Arg(10)->Arg(100);

void BM_BuildSuperoperator(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Matrix h = Matrix::Zero(n, n);
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        h(k, k) = static_cast<double>(k);
        l(k, k) = static_cast<double>(k % 2 ? 1 : -1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(build_superoperator(h, {{0.3, l}}));
}
BENCHMARK(BM_BuildSuperoperator)->Arg(2)->Arg(4)->Arg(8);

void BM_EffectiveHamiltonian(benchmark::State& state)
{
    const Superoperator L = generator_with_rate(1.0, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(effective_hamiltonian(L));
}
BENCHMARK(BM_EffectiveHamiltonian);

void BM_IntegrateTcl(benchmark::State& state)
{
    const auto p = example_model();
    const TimeGrid grid(10.0, 1e-3);
    const auto rates = std::make_shared<const RateTable>(p, grid);
    const GeneratorFn gen = model_generator(p.omega0, rates);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_tcl(gen, example_state(), grid));
}
BENCHMARK(BM_IntegrateTcl)->Unit(benchmark::kMillisecond);

void BM_ThermoTrace(benchmark::State& state)
{
    const auto p = example_model();
    const TimeGrid grid(20.0, 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(build_thermo_trace(p, example_state(), grid));
}
BENCHMARK(BM_ThermoTrace)->Unit(benchmark::kMillisecond);

void BM_FiniteBathEvolve(benchmark::State& state)
{
    const auto modes = discretize_spectral_density(SpectralDensity::ohmic(0.02, 1.0), 2, 6.0);
    const FiniteBathSpec spec(modes, static_cast<int>(state.range(0)), 2.0);
    for (auto _ : state) {
        const FiniteBathSystem sys(spec, 1.0);
        benchmark::DoNotOptimize(sys.evolve(example_state(), 5.0));
    }
}
BENCHMARK(BM_FiniteBathEvolve)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
