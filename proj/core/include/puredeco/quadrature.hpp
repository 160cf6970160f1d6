// quadrature.hpp: Adaptive Gauss–Kronrod quadrature on [0, ∞)
//
// The half line is cut into panels of a caller-chosen width (half a period
// for oscillatory integrands). Each panel is integrated with adaptive G7/K15
// bisection; panels are accumulated with compensated summation until the
// contributions fall below the tolerance or the upper limit is reached.
// Integrands may be vector valued so that several integrals sharing one set
// of nodes are evaluated together.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace puredeco::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    /// Panel width; ≤ 0 selects 1.
    double panel_width = 1.0;
    /// Integrate over [0, upper_limit]; infinite means "until the tail is negligible".
    double upper_limit = std::numeric_limits<double>::infinity();
    int max_panels = 200000;
    int max_depth = 40;
    /// Consecutive negligible panels required before declaring the tail converged.
    int quiet_panels = 4;
};

template <std::size_t M>
using Values = std::array<double, M>;

struct Stats {
    long evaluations = 0;
    int panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583002644759, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t M>
struct Segment {
    Values<M> kronrod{};
    Values<M> error{};
    Values<M> abs_kronrod{};
};

template <std::size_t M, class F>
Segment<M> gk15(F& f, double a, double b, Stats& stats)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Segment<M> s;
    Values<M> gauss{};
    const Values<M> fc = f(c);
    for (std::size_t m = 0; m < M; ++m) {
        s.kronrod[m] = kWk[7] * fc[m];
        gauss[m] = kWg[3] * fc[m];
        s.abs_kronrod[m] = kWk[7] * std::abs(fc[m]);
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = h * kXk[j];
        const Values<M> f1 = f(c - dx);
        const Values<M> f2 = f(c + dx);
        for (std::size_t m = 0; m < M; ++m) {
            const double sum = f1[m] + f2[m];
            s.kronrod[m] += kWk[j] * sum;
            s.abs_kronrod[m] += kWk[j] * (std::abs(f1[m]) + std::abs(f2[m]));
            if (j % 2 == 1) gauss[m] += kWg[j / 2] * sum;
        }
    }
    stats.evaluations += 15;
    for (std::size_t m = 0; m < M; ++m) {
        s.kronrod[m] *= h;
        s.abs_kronrod[m] *= std::abs(h);
        s.error[m] = std::abs(s.kronrod[m] - gauss[m] * h);
    }
    return s;
}

template <std::size_t M, class F>
bool adaptive(F& f, double a, double b, const Segment<M>& whole, const Values<M>& tol, int depth,
              int max_depth, Values<M>& result, Stats& stats)
{
    bool ok = true;
    bool converged = true;
    for (std::size_t m = 0; m < M; ++m) {
        if (!(whole.error[m] <= tol[m])) converged = false;
    }
    if (converged || depth >= max_depth) {
        if (!converged) ok = false;
        for (std::size_t m = 0; m < M; ++m) result[m] += whole.kronrod[m];
        return ok;
    }
    const double mid = 0.5 * (a + b);
    const Segment<M> left = gk15<M>(f, a, mid, stats);
    const Segment<M> right = gk15<M>(f, mid, b, stats);
    Values<M> half_tol;
    for (std::size_t m = 0; m < M; ++m) half_tol[m] = 0.5 * tol[m];
    ok &= adaptive<M>(f, a, mid, left, half_tol, depth + 1, max_depth, result, stats);
    ok &= adaptive<M>(f, mid, b, right, half_tol, depth + 1, max_depth, result, stats);
    return ok;
}

// Neumaier compensated accumulator.
struct Accumulator {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) carry += (sum - t) + x;
        else carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

[[noreturn]] void throw_nonconvergence(const char* reason, double previous, double last);

} // namespace detail

/// Integrates a vector-valued integrand over [0, upper_limit] (or [0, ∞)).
/// Every component is held to rel_tol relative to the integral of its absolute
/// value. Throws QuadratureError carrying the last two estimates of component 0
/// when the refinement budget is exhausted.
template <std::size_t M, class F>
Values<M> integrate_half_line(F&& f, const Options& opt, Stats* stats_out = nullptr)
{
    Stats stats;
    const double width = opt.panel_width > 0.0 ? opt.panel_width : 1.0;
    const bool finite_end = std::isfinite(opt.upper_limit);
    std::array<detail::Accumulator, M> acc{};
    Values<M> abs_total{};
    int quiet = 0;
    double previous = 0.0;

    for (int p = 0; p < opt.max_panels; ++p) {
        const double a = p * width;
        if (finite_end && a >= opt.upper_limit) break;
        const double b = finite_end ? std::min(opt.upper_limit, a + width) : a + width;

        const detail::Segment<M> coarse = detail::gk15<M>(f, a, b, stats);
        Values<M> tol;
        for (std::size_t m = 0; m < M; ++m) {
            // Error budget relative to the panel's own |f| mass and the running total.
            const double scale = std::max(coarse.abs_kronrod[m], 1e-3 * abs_total[m]);
            tol[m] = std::max(opt.abs_tol / std::max(1, opt.max_panels), opt.rel_tol * scale);
        }
        Values<M> panel{};
        if (!detail::adaptive<M>(f, a, b, coarse, tol, 0, opt.max_depth, panel, stats)) {
            detail::throw_nonconvergence("adaptive refinement depth exhausted", previous, acc[0].value());
        }
        previous = acc[0].value();
        bool negligible = true;
        for (std::size_t m = 0; m < M; ++m) {
            acc[m].add(panel[m]);
            abs_total[m] += coarse.abs_kronrod[m];
            if (coarse.abs_kronrod[m] > opt.rel_tol * 1e-2 * abs_total[m] + opt.abs_tol) negligible = false;
        }
        ++stats.panels;
        if (!finite_end) {
            quiet = negligible ? quiet + 1 : 0;
            if (quiet >= opt.quiet_panels) {
                if (stats_out) *stats_out = stats;
                Values<M> out;
                for (std::size_t m = 0; m < M; ++m) out[m] = acc[m].value();
                return out;
            }
        }
        if (finite_end && b >= opt.upper_limit) {
            if (stats_out) *stats_out = stats;
            Values<M> out;
            for (std::size_t m = 0; m < M; ++m) out[m] = acc[m].value();
            return out;
        }
    }
    detail::throw_nonconvergence("panel budget exhausted before the tail converged", previous,
                                 acc[0].value());
}

/// Scalar convenience wrapper: ∫_0^∞ f(ω) dω.
double quad_semiinfinite(const std::function<double(double)>& f, const Options& opt = {});
double quad_semiinfinite(const std::function<double(double)>& f, double rel_tol);

/// Adaptive G7/K15 on a finite interval [a, b].
double quad_interval(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

} // namespace puredeco::quad
