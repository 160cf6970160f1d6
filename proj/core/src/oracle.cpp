// oracle.cpp: Finite bosonic bath, exact unitary evolution

#include "puredeco/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

// Nodes and weights on (-1, 1) by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
    if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

Matrix identity(Eigen::Index n)
{
    return Matrix::Identity(n, n);
}

Matrix annihilation(int levels)
{
    Matrix a = Matrix::Zero(levels, levels);
    for (int k = 0; k + 1 < levels; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    return a;
}

// Operator acting on mode `k` of the bath, identity elsewhere.
Matrix on_mode(const Matrix& op, std::size_t k, std::size_t modes, int levels)
{
    Matrix out = identity(1);
    for (std::size_t j = 0; j < modes; ++j) out = kron(out, j == k ? op : identity(levels));
    return out;
}

double coth(double x)
{
    return 1.0 / std::tanh(x);
}

double expect(const Matrix& op, const Matrix& rho)
{
    return (op.transpose().cwiseProduct(rho)).sum().real();
}

} // namespace

FiniteBathSpec::FiniteBathSpec(std::vector<BathMode> modes, int n_max, double beta)
    : modes_(std::move(modes)), n_max_(n_max), beta_(beta)
{
    if (modes_.empty()) throw ValidationError("finite bath needs at least one mode");
    if (n_max_ < 2) throw ValidationError("n_max must be >= 2");
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ValidationError("beta must be finite and > 0");
    for (const auto& m : modes_) {
        if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw ValidationError("mode frequencies must be > 0");
        if (!std::isfinite(m.g.real()) || !std::isfinite(m.g.imag())) {
            throw ValidationError("mode couplings must be finite");
        }
        const double tail = thermal_tail(m.omega, beta_, n_max_);
        if (tail > kThermalTailTol) {
            std::ostringstream os;
            os << "thermal population above n_max = " << n_max_ << " is " << tail << " for the mode at omega = "
               << m.omega << " (limit " << kThermalTailTol << "); raise n_max or beta";
            throw ValidationError(os.str());
        }
    }
    std::stable_sort(modes_.begin(), modes_.end(),
                     [](const BathMode& a, const BathMode& b) { return a.omega < b.omega; });
}

Eigen::Index FiniteBathSpec::joint_dim() const
{
    double d = 2.0;
    for (std::size_t i = 0; i < modes_.size(); ++i) d *= n_max_;
    return d > 1e12 ? std::numeric_limits<Eigen::Index>::max() : static_cast<Eigen::Index>(d);
}

double FiniteBathSpec::thermal_tail(double omega, double beta, int n_max)
{
    return std::exp(-beta * omega * n_max);
}

std::vector<BathMode> discretize_spectral_density(const SpectralDensity& J, int modes, double omega_max)
{
    if (modes < 1) throw ValidationError("mode count must be >= 1");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw ValidationError("omega_max must be finite and > 0");
    std::vector<double> x, w;
    gauss_legendre(modes, x, w);
    std::vector<BathMode> out;
    out.reserve(static_cast<std::size_t>(modes));
    const double half = 0.5 * omega_max;
    for (int k = 0; k < modes; ++k) {
        const double omega = half * (x[static_cast<std::size_t>(k)] + 1.0);
        const double weight = half * w[static_cast<std::size_t>(k)];
        out.push_back({omega, Complex(std::sqrt(J(omega) * weight), 0.0)});
    }
    return out;
}

FiniteBathAnalytic analytic_finite_bath(const std::vector<BathMode>& modes, double beta, double t)
{
    if (!(t >= 0.0)) throw ValidationError("time must be >= 0");
    FiniteBathAnalytic out;
    for (const auto& m : modes) {
        const double g2 = std::norm(m.g);
        const double s = std::sin(0.5 * m.omega * t);
        const double one_minus_cos = 2.0 * s * s;
        out.eta += 2.0 * g2 * one_minus_cos / (m.omega * m.omega) * coth(0.5 * beta * m.omega);
        out.interaction_energy -= 2.0 * g2 * one_minus_cos / m.omega;
    }
    return out;
}

FiniteBathAnalytic analytic_finite_bath(const FiniteBathSpec& spec, double t)
{
    return analytic_finite_bath(spec.modes(), spec.beta(), t);
}

FiniteBathSystem::FiniteBathSystem(const FiniteBathSpec& spec, double omega0) : spec_(spec), dim_(spec.joint_dim())
{
    if (dim_ > kMaxJointDim) {
        std::ostringstream os;
        os << "joint dimension 2*n_max^K exceeds " << kMaxJointDim << "; with " << spec.modes().size()
           << " modes use n_max <= "
           << static_cast<int>(std::floor(std::pow(kMaxJointDim / 2.0, 1.0 / spec.modes().size()) + 1e-9))
           << " or fewer modes";
        throw ValidationError(os.str());
    }
    const std::size_t k = spec.modes().size();
    const int levels = spec.n_max();
    const Eigen::Index nb = dim_ / 2;

    const Matrix a = annihilation(levels);
    const Matrix number = a.adjoint() * a;
    Matrix he = Matrix::Zero(nb, nb);
    Matrix b = Matrix::Zero(nb, nb);
    Matrix log_e = Matrix::Zero(nb, nb);
    Matrix rho_e = identity(1);
    for (std::size_t j = 0; j < k; ++j) {
        const BathMode& m = spec.modes()[j];
        he += m.omega * on_mode(number, j, k, levels);
        b += on_mode(m.g * a.adjoint() + std::conj(m.g) * a, j, k, levels);

        // Truncated single-mode Gibbs state and its exact logarithm.
        Matrix gibbs = Matrix::Zero(levels, levels);
        Matrix lg = Matrix::Zero(levels, levels);
        double z = 0.0;
        for (int n = 0; n < levels; ++n) z += std::exp(-spec.beta() * m.omega * n);
        for (int n = 0; n < levels; ++n) {
            gibbs(n, n) = std::exp(-spec.beta() * m.omega * n) / z;
            lg(n, n) = -spec.beta() * m.omega * n - std::log(z);
        }
        rho_e = kron(rho_e, gibbs);
        log_e += on_mode(lg, j, k, levels);
    }
    rho_e_ = rho_e;
    log_rho_e_ = log_e;

    h_s_ = kron(system_hamiltonian(omega0), identity(nb));
    h_e_ = kron(identity(2), he);
    h_i_ = kron(sigma_z(), b);

    const HermitianEigen e = eig_hermitian(h_s_ + h_e_ + h_i_, 1e-10);
    energies_ = e.values;
    eigvecs_ = e.vectors;
}

DensityMatrix FiniteBathSystem::initial_state(const DensityMatrix& rho_s0) const
{
    if (rho_s0.dim() != 2) throw ValidationError("system state must be 2x2");
    return DensityMatrix::normalized(kron(rho_s0.matrix(), rho_e_));
}

DensityMatrix FiniteBathSystem::evolve(const DensityMatrix& rho_s0, double t) const
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and >= 0");
    const Matrix r0 = eigvecs_.adjoint() * kron(rho_s0.matrix(), rho_e_) * eigvecs_;
    Vector phase(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) phase(i) = std::polar(1.0, -energies_(i) * t);
    // (e^{−iEt} r0 e^{iEt})_{ij} = r0_ij e^{−i(E_i − E_j)t}
    const Matrix rt = phase.asDiagonal() * r0 * phase.conjugate().asDiagonal();
    return DensityMatrix::normalized(eigvecs_ * rt * eigvecs_.adjoint(), 1e-10);
}

DensityMatrix FiniteBathSystem::reduce_to_system(const DensityMatrix& joint) const
{
    const std::array<Eigen::Index, 2> dims{2, bath_dim()};
    return DensityMatrix::normalized(partial_trace(joint.matrix(), dims, 0), 1e-10);
}

DensityMatrix finite_bath_evolve(const FiniteBathSpec& spec, double omega0, const DensityMatrix& rho_s0, double t)
{
    return FiniteBathSystem(spec, omega0).evolve(rho_s0, t);
}

std::vector<JointRecord> global_quantities_from_joint(const FiniteBathSystem& sys, const std::vector<double>& times,
                                                      const std::vector<DensityMatrix>& states)
{
    if (times.size() != states.size() || states.empty()) {
        throw ValidationError("joint series: times and states must be non-empty and of equal length");
    }
    if (times.front() != 0.0) throw ValidationError("joint series must start at t = 0");
    const double beta = sys.spec().beta();
    const Eigen::Index nb = sys.bath_dim();

    const Matrix& r0 = states.front().matrix();
    const double hs0 = expect(sys.system_part(), r0);
    const double he0 = expect(sys.bath_part(), r0);
    const double hi0 = expect(sys.interaction_part(), r0);
    const double s0 = von_neumann_entropy(sys.reduce_to_system(states.front()));

    std::vector<JointRecord> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const Matrix& r = states[i].matrix();
        const DensityMatrix rs = sys.reduce_to_system(states[i]);
        JointRecord rec;
        rec.t = times[i];
        const double hs = expect(sys.system_part(), r);
        const double he = expect(sys.bath_part(), r);
        const double hi = expect(sys.interaction_part(), r);
        rec.interaction_energy = hi;
        rec.Q_gl = he0 - he;
        rec.energy_residual = (hs - hs0) + (he - he0) + (hi - hi0);
        rec.Sigma_gl = von_neumann_entropy(rs) - s0 - beta * rec.Q_gl;
        rec.coherence = std::abs(rs(0, 1));
        rec.purity = (r * r).trace().real();

        // D(ρ_SE ‖ ρ_S ⊗ ρ_E) = Tr ρ ln ρ − Tr ρ (ln ρ_S ⊗ I + I ⊗ ln ρ_E)
        const Matrix log_ref = kron(log_state(rs), identity(nb)) + kron(identity(2), sys.bath_gibbs_log());
        rec.Sigma_gl_relent = -von_neumann_entropy(states[i]) - expect(log_ref, r);
        out.push_back(rec);
    }
    return out;
}

} // namespace puredeco
