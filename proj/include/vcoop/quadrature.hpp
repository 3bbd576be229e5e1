#pragma once

#include <functional>

namespace vcoop::quad {

struct QuadratureControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi].
/// Bisects the interval with the largest error estimate until the total
/// estimate drops below max(abs_tol, rel_tol * |value|). Throws
/// QuadratureError when the interval budget runs out first.
QuadratureResult integrate(const Integrand& f, double lo, double hi,
                           const QuadratureControl& ctl = {});

/// Integral over [lo, inf) through the map z = lo + t / (1 - t).
QuadratureResult integrate_to_infinity(const Integrand& f, double lo,
                                       const QuadratureControl& ctl = {});

} // namespace vcoop::quad
