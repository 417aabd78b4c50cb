#pragma once

#include <cmath>
#include <stdexcept>

namespace kmbias {

namespace detail {

template <typename F>
double simpson(F& f, double a, double fa, double b, double fb, double& fm) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_step(F& f, double a, double fa, double m, double fm, double b,
                     double fb, double whole, double tol, int depth) {
    double fml, fmr;
    const double left = simpson(f, a, fa, m, fm, fml);
    const double right = simpson(f, m, fm, b, fb, fmr);
    const double refined = left + right;
    // Richardson extrapolation: halving the panel width shrinks
    // Simpson's error by 16, so (refined - whole)/15 estimates it.
    if (depth <= 0 || std::fabs(refined - whole) <= 15.0 * tol) {
        return refined + (refined - whole) / 15.0;
    }
    return adaptive_step(f, a, fa, 0.5 * (a + m), fml, m, fm, left, 0.5 * tol,
                         depth - 1) +
           adaptive_step(f, m, fm, 0.5 * (m + b), fmr, b, fb, right, 0.5 * tol,
                         depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// `tol`. The callable is evaluated at the interval endpoints.
template <typename F>
double integrate(F&& f, double a, double b, double tol) {
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("integrate: bounds must be finite with a <= b");
    }
    if (a == b) return 0.0;
    if (!(tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerance must be positive");
    }
    const double fa = f(a);
    const double fb = f(b);
    double fm;
    const double whole = detail::simpson(f, a, fa, b, fb, fm);
    return detail::adaptive_step(f, a, fa, 0.5 * (a + b), fm, b, fb, whole, tol, 48);
}

}  // namespace kmbias
