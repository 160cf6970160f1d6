// quadrature.cpp: Scalar wrappers and error reporting for the panel quadrature

#include "puredeco/quadrature.hpp"

#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco::quad {

namespace detail {

void throw_nonconvergence(const char* reason, double previous, double last)
{
    std::ostringstream os;
    os.precision(17);
    os << "quadrature did not converge (" << reason << "); last estimates " << previous << ", " << last;
    throw QuadratureError(os.str(), previous, last);
}

} // namespace detail

double quad_semiinfinite(const std::function<double(double)>& f, const Options& opt)
{
    if (!(opt.rel_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    auto g = [&f](double x) { return Values<1>{f(x)}; };
    return integrate_half_line<1>(g, opt)[0];
}

double quad_semiinfinite(const std::function<double(double)>& f, double rel_tol)
{
    Options opt;
    opt.rel_tol = rel_tol;
    return quad_semiinfinite(f, opt);
}

double quad_interval(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    if (!(rel_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    if (a == b) return 0.0;
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    Options opt;
    opt.rel_tol = rel_tol;
    opt.upper_limit = std::abs(b - a);
    opt.panel_width = opt.upper_limit;
    auto g = [&f, lo](double x) { return Values<1>{f(lo + x)}; };
    return sign * integrate_half_line<1>(g, opt)[0];
}

} // namespace puredeco::quad
