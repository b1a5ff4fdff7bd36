#pragma once

// Tall rectangles in H^2 x R (upper half-plane model) and the comparison showing
// that a pair of them sharing their vertical sides is not area-minimizing.
//
// Upper half: phi(r, theta) = (r cos theta, r sin theta, lambda(theta)),
// theta in (0, theta0), csc theta0 = d > 1. Lower half is the mirror t -> -t.
// "F" below is always the incomplete elliptic integral, never the metric factor.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <vector>

#include "h2r/errors.hpp"
#include "h2r/quadrature.hpp"

namespace h2r {

struct TallRectParams {
    double d = 2.0;
    int n = 1;  // r(theta) = tan^n(theta / 2)

    explicit TallRectParams(double d_, int n_ = 1) : d(d_), n(n_) {
        if (!(d > 1.0) || !std::isfinite(d)) throw DomainError("tall rectangle needs d > 1");
        if (n < 1) throw DomainError("exponent n must be >= 1");
    }
    double theta0() const { return std::asin(1.0 / d); }
};

struct EllipticValue {
    double phi = 0.0;
    double m = 0.0;
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// For m > 1 substitute sin s = sin(p) / sqrt(m); the square-root endpoint at
// s = arcsin(1/sqrt m) becomes the smooth endpoint p = pi/2.
//   ds / sqrt(1 - m sin^2 s) = dp / (sqrt m sqrt(1 - sin^2 p / m))
//   sqrt(1 - m sin^2 s) ds   = cos^2 p dp / (sqrt m sqrt(1 - sin^2 p / m))
template <bool Second>
EllipticValue elliptic(double phi, double m, double tol) {
    if (!std::isfinite(phi) || !std::isfinite(m)) throw DomainError("elliptic integral arguments must be finite");
    if (phi < 0.0) {
        auto e = elliptic<Second>(-phi, m, tol);
        e.phi = phi;
        e.value = -e.value;
        return e;
    }
    EllipticValue out{phi, m, 0.0, 0.0};
    if (m > 1.0) {
        const double s = std::sqrt(m) * std::sin(phi);
        // allow round-off at the endpoint itself
        if (phi > std::numbers::pi / 2 || s > 1.0 + 1e-14)
            throw DomainError("elliptic integral radicand is negative on [0, phi]");
        const double pmax = std::asin(std::min(1.0, s));
        const double rm = std::sqrt(m);
        auto g = [&](double p) {
            const double sp = std::sin(p), c = std::cos(p);
            const double w = 1.0 / (rm * std::sqrt(1.0 - sp * sp / m));
            return Second ? c * c * w : w;
        };
        const auto q = integrate(g, 0.0, pmax, tol);
        out.value = q.value;
        out.error = q.error;
        return out;
    }
    if (m == 1.0 && !Second && phi >= std::numbers::pi / 2)
        throw DomainError("F(phi|1) diverges at phi = pi/2");
    auto f = [&](double s) {
        const double v = 1.0 - m * std::sin(s) * std::sin(s);
        return Second ? std::sqrt(std::max(v, 0.0)) : 1.0 / std::sqrt(v);
    };
    const auto q = integrate(f, 0.0, phi, tol);
    out.value = q.value;
    out.error = q.error;
    return out;
}

}  // namespace detail

inline EllipticValue elliptic_E(double phi, double m, double tol = 1e-13) { return detail::elliptic<true>(phi, m, tol); }
inline EllipticValue elliptic_F(double phi, double m, double tol = 1e-13) { return detail::elliptic<false>(phi, m, tol); }

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

/// lambda(theta) = int_theta^theta0 d csc t / sqrt(csc^2 t - d^2) dt.
/// With sin p = d sin t the integrand becomes 1 / sqrt(1 - sin^2 p / d^2) on [p(theta), pi/2].
inline ValueWithError lambda_profile_with_error(const TallRectParams& prm, double theta, double tol = 1e-13) {
    const double t0 = prm.theta0();
    if (!(theta >= 0.0 && theta <= t0)) throw DomainError("lambda is defined on [0, theta0]");
    const double d = prm.d;
    const double p = std::asin(std::min(1.0, d * std::sin(theta)));
    auto g = [&](double q) {
        const double s = std::sin(q) / d;
        return 1.0 / std::sqrt(1.0 - s * s);
    };
    const auto r = integrate(g, p, std::numbers::pi / 2, tol);
    return {r.value, r.error};
}

inline double lambda_profile(const TallRectParams& prm, double theta, double tol = 1e-13) {
    return lambda_profile_with_error(prm, theta, tol).value;
}

/// d lambda / d theta = -d csc theta / sqrt(csc^2 theta - d^2)
inline double lambda_derivative(const TallRectParams& prm, double theta) {
    const double c = 1.0 / std::sin(theta);
    return -prm.d * c / std::sqrt(c * c - prm.d * prm.d);
}

inline double tall_rectangle_height(const TallRectParams& prm) { return 2.0 * lambda_profile(prm, 0.0); }

// Antiderivative of -csc^2 t / sqrt(1 - d^2 sin^2 t):
//   G(t) = cot t sqrt(1 - d^2 sin^2 t) + E(t|d^2) - F(t|d^2)
inline ValueWithError sigma1_bracket(const TallRectParams& prm, double theta, double tol = 1e-13) {
    const double t0 = prm.theta0(), m = prm.d * prm.d;
    const auto E = elliptic_E(theta, m, tol), F = elliptic_F(theta, m, tol);
    const auto E0 = elliptic_E(t0, m, tol), F0 = elliptic_F(t0, m, tol);
    const double S = std::sqrt(std::max(0.0, 1.0 - m * std::sin(theta) * std::sin(theta)));
    const double v = S / std::tan(theta) + (E.value - F.value) - (E0.value - F0.value);
    return {v, E.error + F.error + E0.error + F0.error};
}

/// Area of Sigma_1 for the window (r, 1/r) x (theta, theta0), both halves; takes log r.
inline ValueWithError area_sigma1_log(double log_r, double theta, const TallRectParams& prm, double tol = 1e-13) {
    if (!(log_r < 0.0)) throw DomainError("area windows need 0 < r < 1");
    if (!(theta > 0.0 && theta < prm.theta0())) throw DomainError("area windows need 0 < theta < theta0");
    const auto b = sigma1_bracket(prm, theta, tol);
    return {-4.0 * log_r * b.value, 4.0 * std::abs(log_r) * b.error};
}

inline double area_sigma1(double r, double theta, const TallRectParams& prm, double tol = 1e-13) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("area windows need 0 < r < 1");
    return area_sigma1_log(std::log(r), theta, prm, tol).value;
}

/// Horizontal piece D_1 over (r, 1/r) x (theta, pi - theta).
inline double area_D1_log(double log_r, double theta) {
    if (!(log_r <= 0.0)) throw DomainError("area windows need 0 < r <= 1");
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) throw DomainError("D_1 needs 0 < theta < pi/2");
    return -4.0 * log_r / std::tan(theta);
}

inline double area_D1(double r, double theta) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("area windows need 0 < r <= 1");
    return area_D1_log(std::log(r), theta);
}

/// Upper bound for the vertical piece B_1: 2 lambda(0) log cot^2(theta / 2).
inline ValueWithError area_B1_bound_with_error(double theta, const TallRectParams& prm, double tol = 1e-13) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) throw DomainError("B_1 bound needs 0 < theta < pi");
    const auto l0 = lambda_profile_with_error(prm, 0.0, tol);
    const double L = -2.0 * std::log(std::tan(0.5 * theta));
    return {2.0 * l0.value * L, 2.0 * l0.error * std::abs(L)};
}

inline double area_B1_bound(double theta, const TallRectParams& prm, double tol = 1e-13) {
    return area_B1_bound_with_error(theta, prm, tol).value;
}

struct RatioValue {
    double f = 0.0;
    double error = 0.0;  // propagated quadrature bound plus a round-off allowance
    double A1 = 0.0, A2 = 0.0, A3 = 0.0;
};

/// f(theta) = A1 / (A2 + A3) with r = tan^n(theta / 2).
inline RatioValue ratio_f_with_error(double theta, const TallRectParams& prm, double tol = 1e-13) {
    if (!(theta > 0.0 && theta < prm.theta0())) throw DomainError("ratio needs 0 < theta < theta0");
    const double log_r = prm.n * std::log(std::tan(0.5 * theta));
    const auto a1 = area_sigma1_log(log_r, theta, prm, tol);
    const double a2 = area_D1_log(log_r, theta);
    const auto a3 = area_B1_bound_with_error(theta, prm, tol);
    RatioValue out;
    out.A1 = a1.value;
    out.A2 = a2;
    out.A3 = a3.value;
    const double den = a2 + a3.value;
    out.f = a1.value / den;
    // |d f| <= (|dA1| + f |dA3|) / den, plus a few ulps per operation on each area
    const double eps = std::numeric_limits<double>::epsilon();
    const double roundoff = 64 * eps * (std::abs(a1.value) + std::abs(out.f) * den) / den;
    out.error = (a1.error + std::abs(out.f) * a3.error) / den + roundoff;
    return out;
}

inline double ratio_f(double theta, const TallRectParams& prm, double tol = 1e-13) {
    return ratio_f_with_error(theta, prm, tol).f;
}

/// Limit of f' at 0: F(theta0|d^2) - E(theta0|d^2) - lambda(0) / n.
inline double limit_slope(const TallRectParams& prm, double tol = 1e-13) {
    const double t0 = prm.theta0(), m = prm.d * prm.d;
    return elliptic_F(t0, m, tol).value - elliptic_E(t0, m, tol).value - lambda_profile(prm, 0.0, tol) / prm.n;
}

/// Smallest n for which the limiting slope is positive.
inline int smallest_positive_slope_n(double d, int n_max = 200) {
    for (int n = 1; n <= n_max; ++n)
        if (limit_slope(TallRectParams(d, n)) > 0.0) return n;
    throw NoWitness("no exponent up to the cap makes the limiting slope positive");
}

struct Witness {
    double d = 0.0;
    int n = 0;
    double theta_star = 0.0;
    double f_value = 0.0;
    double error_bound = 0.0;
    double A1 = 0.0, A2 = 0.0, A3 = 0.0;
    double margin() const { return f_value - error_bound - 1.0; }
};

struct WitnessOptions {
    int n_max = 200;
    int theta_samples = 400;   // log-spaced in (0, theta0)
    double theta_min_frac = 1e-6;
    double tol = 1e-13;
    // accept only if f - 1 > safety * bound and f - 1 > min_margin
    double safety = 100.0;
    double min_margin = 1e-6;
    bool parallel = true;
};

namespace detail {

inline std::optional<Witness> best_theta(double d, int n, const WitnessOptions& o) {
    const TallRectParams prm(d, n);
    const double t0 = prm.theta0();
    std::optional<Witness> best;
    const double lo = std::log(o.theta_min_frac * t0), hi = std::log(0.999 * t0);
    for (int i = 0; i < o.theta_samples; ++i) {
        const double th = std::exp(lo + (hi - lo) * i / (o.theta_samples - 1));
        RatioValue v;
        try {
            v = ratio_f_with_error(th, prm, o.tol);
        } catch (const NumericsError&) {
            continue;  // uncertified sample; skip rather than trust it
        }
        const double excess = v.f - 1.0;
        if (excess > o.safety * v.error && excess > o.min_margin && (!best || v.f - v.error - 1.0 > best->margin()))
            best = Witness{d, n, th, v.f, v.error, v.A1, v.A2, v.A3};
    }
    return best;
}

}  // namespace detail

/// Scans n = 1..n_max (in parallel blocks) and returns the certified witness with
/// the smallest n, taking the theta that maximizes f - bound.
inline Witness verify_not_minimizing(double d, const WitnessOptions& o = {}) {
    if (!(d > 1.0)) throw DomainError("tall rectangle needs d > 1");
    const int block = o.parallel ? 8 : 1;
    for (int n0 = 1; n0 <= o.n_max; n0 += block) {
        std::vector<std::future<std::optional<Witness>>> jobs;
        for (int n = n0; n < n0 + block && n <= o.n_max; ++n)
            jobs.push_back(std::async(o.parallel ? std::launch::async : std::launch::deferred,
                                      [=] { return detail::best_theta(d, n, o); }));
        for (auto& j : jobs) {
            auto w = j.get();
            if (w) {
                for (auto& rest : jobs)
                    if (rest.valid()) rest.wait();
                return *w;
            }
        }
    }
    throw NoWitness("no certified witness up to the configured caps");
}

/// Independent check of area_sigma1: integrates sqrt(EG - F^2) of the parametrization
/// over (r, 1/r) x (theta, theta0) in the half-plane metric, doubled for the mirrored
/// half. theta = theta0 - w^2 removes the square-root blow-up of lambda' at theta0.
inline double sigma1_surface_quadrature(double r, double theta, const TallRectParams& prm) {
    using boost::math::quadrature::gauss_kronrod;
    const double t0 = prm.theta0(), d = prm.d;
    const double c0 = std::cos(t0);
    // dA at theta = theta0 - delta
    auto dA = [&](double u, double delta) {
        // phi_u = (cos v, sin v, 0), phi_v = (-u sin v, u cos v, lambda'(v)); y = u sin v
        const double sv = std::sin(t0 - delta), y = u * sv;
        // 1 - d sin(theta0 - delta), written without cancellation
        const double sh = std::sin(0.5 * delta);
        const double one_minus = 2.0 * sh * sh + d * c0 * std::sin(delta);
        const double q = one_minus * (1.0 + d * sv) / (sv * sv);  // csc^2 - d^2
        const double lp2 = d * d / (sv * sv * q);
        const double E = 1.0 / (y * y);
        const double G = (u * u) / (y * y) + lp2;
        return std::sqrt(E * G);  // F = 0
    };
    const double wmax = std::sqrt(t0 - theta);
    auto inner = [&](double u) {
        auto g = [&](double w) { return 2.0 * w * dA(u, w * w); };
        return gauss_kronrod<double, 61>::integrate(g, 0.0, wmax, 15, 1e-13);
    };
    // s = log u makes the outer integrand smooth
    auto outer = [&](double s) { return std::exp(s) * inner(std::exp(s)); };
    const double L = std::log(r);
    return 2.0 * gauss_kronrod<double, 61>::integrate(outer, L, -L, 15, 1e-12);
}

/// Independent check of area_D1: the flat annular sector in the half-plane metric.
inline double d1_area_quadrature(double r, double theta) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double u) {
        auto g = [&](double v) { return u / (u * u * std::sin(v) * std::sin(v)); };
        return gauss_kronrod<double, 61>::integrate(g, theta, std::numbers::pi - theta, 15, 1e-13);
    };
    auto outer = [&](double s) { return std::exp(s) * inner(std::exp(s)); };
    return gauss_kronrod<double, 61>::integrate(outer, std::log(r), -std::log(r), 15, 1e-12);
}

}  // namespace h2r
