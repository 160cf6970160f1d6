// dephasing.cpp: Exact qubit dephasing model and a fourth-order TCL integrator

#include "puredeco/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

void require_qubit(const DensityMatrix& rho)
{
    if (rho.dim() != 2) throw ValidationError("the dephasing model acts on a 2x2 density matrix");
}

} // namespace

TimeGrid::TimeGrid(double t_end, double step) : t_end_(t_end), step_(step), count_(0)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("time grid end must be finite and > 0");
    if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("time grid step must be finite and > 0");
    const double n = std::round(t_end / step);
    if (n < 1.0 || std::abs(n * step - t_end) > 1e-9 * t_end) {
        std::ostringstream os;
        os << "time step " << step << " does not divide t_end " << t_end;
        throw ValidationError(os.str());
    }
    count_ = static_cast<std::size_t>(n);
}

double TimeGrid::operator[](std::size_t i) const noexcept
{
    return i >= count_ ? t_end_ : static_cast<double>(i) * step_;
}

std::vector<double> TimeGrid::points() const
{
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i];
    return out;
}

Matrix sigma_z()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = -1.0;
    s(1, 1) = 1.0;
    return s;
}

Matrix system_hamiltonian(double omega0)
{
    if (!std::isfinite(omega0)) throw ValidationError("omega0 must be finite");
    return 0.5 * omega0 * sigma_z();
}

DensityMatrix analytic_state_from_eta(double omega0, const DensityMatrix& rho0, double t, double eta)
{
    require_qubit(rho0);
    Matrix m = rho0.matrix();
    const Complex phase = std::polar(std::exp(-eta), omega0 * t);
    m(0, 1) = rho0(0, 1) * phase;
    m(1, 0) = std::conj(m(0, 1));
    return DensityMatrix(std::move(m));
}

DensityMatrix analytic_state(const ModelParams& p, const DensityMatrix& rho0, double t, const SpectralOptions& opt)
{
    require_qubit(rho0);
    const double eta = decoherence_eta(p.spectral, p.temperature, t, opt);
    return analytic_state_from_eta(p.omega0, rho0, t, eta);
}

Superoperator generator_with_rate(double omega0, double gamma)
{
    if (!std::isfinite(gamma)) throw ValidationError("dephasing rate must be finite");
    // Diagonal on vec(ρ) = (ρ00, ρ10, ρ01, ρ11).
    Matrix m = Matrix::Zero(4, 4);
    m(1, 1) = Complex(-2.0 * gamma, -omega0);
    m(2, 2) = Complex(-2.0 * gamma, omega0);
    return Superoperator(2, std::move(m), false);
}

Superoperator exact_generator(const ModelParams& p, double t, const SpectralOptions& opt)
{
    const double gamma = rate_gamma(p.spectral, p.temperature, t, opt);
    return build_superoperator(system_hamiltonian(p.omega0), {{gamma, sigma_z()}});
}

RateTable::RateTable(const ModelParams& p, const TimeGrid& grid, const SpectralOptions& opt)
    : step_(grid.step()), gamma_(grid.size()), gamma_dot_(grid.size())
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const BathIntegrals b = rate_integrals(p.spectral, p.temperature, grid[i], opt);
        gamma_[i] = b.gamma;
        gamma_dot_[i] = b.gamma_dot;
    }
}

RateTable::RateTable(double step, std::vector<double> gamma, std::vector<double> gamma_dot)
    : step_(step), gamma_(std::move(gamma)), gamma_dot_(std::move(gamma_dot))
{
    if (!(step > 0.0)) throw ValidationError("rate table step must be > 0");
    if (gamma_.size() < 2 || gamma_.size() != gamma_dot_.size()) {
        throw ValidationError("rate table needs matching value and derivative samples");
    }
}

double RateTable::operator()(double t) const
{
    const double end = t_end();
    if (t < -1e-12 * end || t > end * (1.0 + 1e-12)) throw DomainError("rate table queried outside its grid");
    const double x = std::clamp(t / step_, 0.0, static_cast<double>(gamma_.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), gamma_.size() - 2);
    const double s = x - static_cast<double>(i);
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * gamma_[i] + h10 * step_ * gamma_dot_[i] + h01 * gamma_[i + 1] + h11 * step_ * gamma_dot_[i + 1];
}

double RateTable::derivative(double t) const
{
    const double x = std::clamp(t / step_, 0.0, static_cast<double>(gamma_.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), gamma_.size() - 2);
    const double s = x - static_cast<double>(i);
    const double d00 = 6.0 * s * (s - 1.0);
    const double d10 = (1.0 - s) * (1.0 - 3.0 * s);
    const double d01 = -d00;
    const double d11 = s * (3.0 * s - 2.0);
    return (d00 * gamma_[i] + d01 * gamma_[i + 1]) / step_ + d10 * gamma_dot_[i] + d11 * gamma_dot_[i + 1];
}

GeneratorFn model_generator(double omega0, std::shared_ptr<const RateTable> rates)
{
    return [omega0, rates = std::move(rates)](double t) { return generator_with_rate(omega0, (*rates)(t)); };
}

Trajectory integrate_tcl(const GeneratorFn& generator, const DensityMatrix& rho0, const TimeGrid& grid,
                         const IntegratorOptions& opt)
{
    const Eigen::Index n = rho0.dim();
    const std::size_t every = std::max<std::size_t>(1, opt.record_every);
    const double h = grid.step();

    Trajectory traj;
    traj.samples.reserve(grid.size() / every + 2);
    traj.trace_drift_log.reserve(grid.size());
    traj.samples.push_back({0.0, rho0});

    Vector v = vec(rho0.matrix());
    auto rhs = [&generator, n](double t, const Vector& x) -> Vector {
        const Superoperator L = generator(t);
        if (L.dim() != n) throw ValidationError("generator dimension does not match initial state");
        return L.matrix() * x;
    };

    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i - 1];
        const Vector k1 = rhs(t, v);
        const Vector k2 = rhs(t + 0.5 * h, v + 0.5 * h * k1);
        const Vector k3 = rhs(t + 0.5 * h, v + 0.5 * h * k2);
        const Vector k4 = rhs(t + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        Matrix m = unvec(v, n);
        const double herm_drift = max_abs(m - m.adjoint()) * 0.5;
        m = hermitize(m);
        const double tr = m.trace().real();
        const double drift = std::abs(tr - 1.0);
        m /= tr;
        traj.trace_drift_log.push_back(drift);
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, herm_drift);

        const double lmin = eig_hermitian(m).values.minCoeff();
        if (lmin < -opt.positivity_tol) {
            std::ostringstream os;
            os << "integration drift: eigenvalue " << lmin << " at t = " << grid[i]
               << "; reduce the time step (currently " << h << ")";
            throw IntegrationDriftError(os.str());
        }
        v = vec(m);
        if (i % every == 0 || i + 1 == grid.size()) {
            traj.samples.push_back({grid[i], DensityMatrix(m, opt.positivity_tol)});
        }
    }
    return traj;
}

} // namespace puredeco
