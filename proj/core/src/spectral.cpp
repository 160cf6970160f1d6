// spectral.cpp: Bath spectral densities and their frequency integrals

#include "puredeco/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "puredeco/errors.hpp"
#include "puredeco/quadrature.hpp"

namespace puredeco {

namespace {

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and non-negative");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

enum Component : unsigned {
    kEta = 1u << 0,
    kGamma = 1u << 1,
    kGammaDot = 1u << 2,
    kInteraction = 1u << 3,
};

BathIntegrals integrate(const SpectralDensity& J, const Temperature& T, double t, unsigned mask,
                        const SpectralOptions& opt)
{
    require_time(t);
    if (!(opt.rel_tol > 0.0)) throw ValidationError("spectral tolerance must be positive");

    quad::Options qo;
    qo.rel_tol = opt.rel_tol;
    qo.upper_limit = J.upper_limit(opt.rel_tol);
    const double scale = J.scale();
    // Half-period panels once the integrand oscillates many times per cutoff.
    qo.panel_width = (t * scale > 10.0) ? std::numbers::pi / t : scale;

    auto integrand = [&J, &T, t, mask](double w) {
        quad::Values<4> out{};
        const double jw = J.over_omega(w);
        if (jw == 0.0) return out;
        const double wc = T.omega_coth(w);
        const double s_half = std::sin(0.5 * w * t);
        if (mask & kEta) {
            // 2 J (1 − cos ωt)/ω² coth = 4 (J/ω) (sin(ωt/2)/ω)² ω coth
            const double r = w > 0.0 ? s_half / w : 0.5 * t;
            out[0] = 4.0 * jw * r * r * wc;
        }
        if (mask & (kGamma | kGammaDot)) {
            const double s = std::sin(w * t);
            const double c = std::cos(w * t);
            if (mask & kGamma) out[1] = jw * (w > 0.0 ? s / w : t) * wc;
            if (mask & kGammaDot) out[2] = jw * c * wc;
        }
        if (mask & kInteraction) out[3] = -4.0 * jw * s_half * s_half;
        return out;
    };
    const quad::Values<4> v = quad::integrate_half_line<4>(integrand, qo);
    return {v[0], v[1], v[2], v[3]};
}

} // namespace

SpectralDensity SpectralDensity::ohmic(double alpha, double cutoff)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be finite and >= 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ValidationError("cutoff must be finite and > 0");
    SpectralDensity j;
    j.kind_ = Kind::OhmicExponential;
    j.alpha_ = alpha;
    j.cutoff_ = cutoff;
    return j;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> values)
{
    if (omega.size() != values.size() || omega.size() < 2) {
        throw ValidationError("tabulated spectral density needs at least two (omega, J) samples");
    }
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(values[i])) {
            throw ValidationError("tabulated spectral density has non-finite samples");
        }
        if (omega[i] < 0.0) throw ValidationError("tabulated frequencies must be >= 0");
        if (values[i] < 0.0) throw ValidationError("tabulated J(omega) must be >= 0");
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw ValidationError("tabulated frequencies must be strictly increasing");
        }
    }
    if (omega.front() == 0.0 && values.front() != 0.0) {
        throw ValidationError("tabulated J(0) must vanish for the decoherence integrals to exist");
    }
    SpectralDensity j;
    j.kind_ = Kind::Tabulated;
    j.cutoff_ = omega.back();
    j.omega_ = std::move(omega);
    j.values_ = std::move(values);
    return j;
}

SpectralDensity SpectralDensity::load_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open spectral density file " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "omega,J") {
        throw ValidationError("spectral density CSV must start with the header 'omega,J'");
    }
    std::vector<double> w, v;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("spectral density CSV line " + std::to_string(lineno) + ": expected two columns");
        }
        try {
            std::size_t used = 0;
            const std::string a = trim(line.substr(0, comma));
            const std::string b = trim(line.substr(comma + 1));
            w.push_back(std::stod(a, &used));
            if (used != a.size()) throw std::invalid_argument(a);
            v.push_back(std::stod(b, &used));
            if (used != b.size()) throw std::invalid_argument(b);
        } catch (const std::exception&) {
            throw ValidationError("spectral density CSV line " + std::to_string(lineno) + ": not a number");
        }
    }
    return tabulated(std::move(w), std::move(v));
}

double SpectralDensity::operator()(double omega) const
{
    if (omega <= 0.0) return 0.0;
    return omega * over_omega(omega);
}

double SpectralDensity::over_omega(double omega) const
{
    if (omega < 0.0) return 0.0;
    if (kind_ == Kind::OhmicExponential) return alpha_ * std::exp(-omega / cutoff_);

    if (omega >= omega_.back()) return omega == omega_.back() && omega > 0.0 ? values_.back() / omega : 0.0;
    if (omega <= omega_.front()) {
        // Straight line from (0, 0) to the first node: J/ω is constant there.
        return omega_.front() > 0.0 ? values_.front() / omega_.front()
                                    : (values_[1] - values_[0]) / (omega_[1] - omega_[0]);
    }
    const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
    const std::size_t i = static_cast<std::size_t>(it - omega_.begin()) - 1;
    const double frac = (omega - omega_[i]) / (omega_[i + 1] - omega_[i]);
    const double value = values_[i] + frac * (values_[i + 1] - values_[i]);
    return value / omega;
}

double SpectralDensity::upper_limit(double tol) const
{
    if (kind_ == Kind::Tabulated) return omega_.back();
    const double safety = 10.0;
    return cutoff_ * (std::log(1.0 / std::min(tol, 0.1)) + safety);
}

double SpectralDensity::scale() const noexcept
{
    if (kind_ == Kind::OhmicExponential) return cutoff_;
    return std::max(omega_.back() / 32.0, omega_[1] - omega_[0]);
}

SpectralDensity SpectralDensity::scaled(double factor) const
{
    if (!(factor >= 0.0)) throw ValidationError("scale factor must be >= 0");
    SpectralDensity j = *this;
    j.alpha_ *= factor;
    for (auto& v : j.values_) v *= factor;
    return j;
}

Temperature Temperature::finite(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("inverse temperature beta must be finite and > 0");
    Temperature t;
    t.beta_ = beta;
    return t;
}

Temperature Temperature::zero()
{
    return Temperature{};
}

double Temperature::beta() const
{
    if (!beta_) throw UnsupportedError("beta is undefined in zero-temperature mode");
    return *beta_;
}

double Temperature::omega_coth(double omega) const
{
    if (!beta_) return omega;
    const double x = 0.5 * *beta_ * omega;
    // x coth x, with its series near the removable singularity.
    double xcoth;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        xcoth = 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    } else {
        xcoth = x / std::tanh(x);
    }
    return 2.0 * xcoth / *beta_;
}

double decoherence_eta(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt)
{
    if (t == 0.0) return 0.0;
    return integrate(J, T, t, kEta, opt).eta;
}

double rate_gamma(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt)
{
    if (t == 0.0) return 0.0;
    return integrate(J, T, t, kGamma, opt).gamma;
}

double rate_gamma_derivative(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt)
{
    return integrate(J, T, t, kGammaDot, opt).gamma_dot;
}

double interaction_energy(const SpectralDensity& J, double t, const SpectralOptions& opt)
{
    if (t == 0.0) return 0.0;
    return integrate(J, Temperature::zero(), t, kInteraction, opt).interaction_energy;
}

BathIntegrals bath_integrals(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt)
{
    if (t == 0.0) {
        BathIntegrals b;
        b.gamma_dot = rate_gamma_derivative(J, T, 0.0, opt);
        return b;
    }
    // ⟨H_I⟩ ignores temperature; the coth factor only enters the other three.
    BathIntegrals b = integrate(J, T, t, kEta | kGamma | kGammaDot, opt);
    b.interaction_energy = interaction_energy(J, t, opt);
    return b;
}

BathIntegrals rate_integrals(const SpectralDensity& J, const Temperature& T, double t, const SpectralOptions& opt)
{
    if (t == 0.0) {
        BathIntegrals b;
        b.gamma_dot = rate_gamma_derivative(J, T, 0.0, opt);
        return b;
    }
    return integrate(J, T, t, kGamma | kGammaDot, opt);
}

double markov_rate(double alpha, double beta)
{
    if (!(beta > 0.0)) throw ValidationError("markov_rate requires beta > 0");
    if (!(alpha >= 0.0)) throw ValidationError("markov_rate requires alpha >= 0");
    return alpha * std::numbers::pi / beta;
}

double ohmic_eta_closed(double alpha, double cutoff, const Temperature& T, double t)
{
    if (!T.is_zero()) throw UnsupportedError("eta has no closed form at finite temperature; use decoherence_eta");
    require_time(t);
    const double x = cutoff * t;
    return alpha * std::log1p(x * x);
}

double ohmic_gamma_closed(double alpha, double cutoff, const Temperature& T, double t)
{
    if (!T.is_zero()) throw UnsupportedError("Gamma has no closed form at finite temperature; use rate_gamma");
    require_time(t);
    const double x = cutoff * t;
    return alpha * cutoff * x / (1.0 + x * x);
}

double ohmic_interaction_energy_closed(double alpha, double cutoff, double t)
{
    require_time(t);
    const double x = cutoff * t;
    return -2.0 * alpha * cutoff * x * x / (1.0 + x * x);
}

OhmicClosedForms ohmic_closed_forms(double alpha, double cutoff, const Temperature& T, double t)
{
    OhmicClosedForms out;
    out.interaction_energy = ohmic_interaction_energy_closed(alpha, cutoff, t);
    if (T.is_zero()) {
        out.eta = ohmic_eta_closed(alpha, cutoff, T, t);
        out.gamma = ohmic_gamma_closed(alpha, cutoff, T, t);
    }
    return out;
}

} // namespace puredeco
