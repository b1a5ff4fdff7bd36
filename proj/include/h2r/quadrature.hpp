#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "h2r/errors.hpp"

namespace h2r {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

// Adaptive Gauss-Kronrod (15/31) on [a, b]. The integrand must be smooth on the
// closed interval; callers remove endpoint singularities by substitution first.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-13,
                           unsigned max_depth = 18) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == b) return {0.0, 0.0};
    QuadratureResult out;
    double l1 = 0.0;
    // Boost's error estimate degrades on very short intervals, so always work on [0, 1].
    const double len = b - a;
    auto g = [&](double s) { return len * f(a + len * s); };
    out.value = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, max_depth, 1e-10, &out.error, &l1);
    if (out.error > abs_tol && l1 > 0.0) {
        // relative target implied by the absolute one, floored above round-off
        const double rel = std::max(0.5 * abs_tol / l1, 64 * std::numeric_limits<double>::epsilon());
        out.value = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, max_depth, rel, &out.error, &l1);
    }
    // Kronrod's estimate can be exactly zero for polynomial-like integrands.
    out.error = std::max(out.error, 4 * std::numeric_limits<double>::epsilon() * l1);
    if (!std::isfinite(out.value) || out.error > abs_tol) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "quadrature did not reach tolerance " << abs_tol << " on [" << a << "," << b
            << "] (estimate " << out.error << ")";
        throw NumericsError(msg.str(), out.error);
    }
    return out;
}

}  // namespace h2r
