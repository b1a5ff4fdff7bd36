#pragma once

// Rotationally invariant minimal catenoids C_{h,z0} in H^2 x R.
//
// The profile r(t) satisfies the first integral
//     kappa^2 = (1 - r^2)^2 / (4 r^2) + (r'/r)^2,
// equivalently r'^2 = (r^2 - a^2)(a^-2 - r^2) / 4 with a = sqrt(1 + kappa^2) - kappa the
// neck radius. Writing r = a cosh(w) removes the square-root singularity at the neck:
//     dt/dw = 2 / sqrt((a^-1 - a cosh w)(a^-1 + a cosh w)),
// which is smooth on [0, W], W = acosh(1/a). The half-height is h = t(W).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "h2r/errors.hpp"
#include "h2r/geometry.hpp"
#include "h2r/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace h2r {

struct CatenoidParams {
    double kappa = 1.0;
    double h = 0.0;
    DiskPoint z0{};
};

struct CatenoidProfile {
    double kappa = 1.0;
    double h = 0.0;
    double r_min = 1.0;
    std::vector<double> t;   // uniform on [-h, h]
    std::vector<double> r;   // r(t_i)
    std::vector<double> rt;  // r'(t_i) from the first integral
    double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

inline void require_positive_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
}

inline double neck_radius(double kappa) {
    require_positive_kappa(kappa);
    // sqrt(1 + k^2) - k without cancellation for large k
    return 1.0 / (std::sqrt(1.0 + kappa * kappa) + kappa);
}

namespace detail {

struct NeckChart {
    static constexpr int panels = 48;
    double kappa, a, W;
    double total_error = 0.0;
    std::vector<double> cumulative;  // t at panel boundaries

    explicit NeckChart(double k) : kappa(k), a(neck_radius(k)) {
        // 2 sinh^2(W/2) = 1/a - 1 = kappa + kappa^2 / (sqrt(1 + kappa^2) + 1)
        const double excess = kappa + kappa * kappa / (std::sqrt(1.0 + kappa * kappa) + 1.0);
        W = 2.0 * std::asinh(std::sqrt(0.5 * excess));
        cumulative.assign(panels + 1, 0.0);
        for (int p = 0; p < panels; ++p) {
            const auto q = integrate([this](double v) { return dt_dw(v); }, edge(p), edge(p + 1),
                                     1e-13);
            cumulative[p + 1] = cumulative[p] + q.value;
            total_error += q.error;
        }
    }

    double edge(int p) const { return W * p / panels; }

    // a^-1 - a cosh w, using a^-1 - a = 2 kappa
    double gap(double w) const {
        const double s = std::sinh(0.5 * w);
        return 2.0 * kappa - 2.0 * a * s * s;
    }
    double dt_dw(double w) const { return 2.0 / std::sqrt(gap(w) * (1.0 / a + a * std::cosh(w))); }

    double half_height() const { return cumulative.back(); }

    // t(w): panel table plus a fixed 20-point Gauss rule on the partial panel
    double t_of_w(double w) const {
        if (w <= 0.0) return 0.0;
        if (w >= W) return cumulative.back();
        const int p = std::min(panels - 1, static_cast<int>(w / W * panels));
        return cumulative[p] + boost::math::quadrature::gauss<double, 20>::integrate(
                                   [this](double v) { return dt_dw(v); }, edge(p), w);
    }

    // |r'| at r = a cosh w
    double speed(double w) const {
        return 0.5 * a * std::sinh(w) * std::sqrt(gap(w) * (1.0 / a + a * std::cosh(w)));
    }

    // invert t(w) = target on [0, W] (Newton, safeguarded by bisection)
    double w_of_t(double target) const {
        const double h = half_height();
        if (target <= 0.0) return 0.0;
        if (target >= h) return W;
        double lo = 0.0, hi = W;
        double w = W * target / h;
        for (int it = 0; it < 100; ++it) {
            const double f = t_of_w(w) - target;
            if (f > 0) hi = w; else lo = w;
            if (f == 0.0) break;
            double next = w - f / dt_dw(w);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - w) <= 4e-16 * W) { w = next; break; }
            w = next;
        }
        return w;
    }
};

}  // namespace detail

/// Half-height h of the catenoid with first-integral constant kappa.
inline QuadratureResult half_height_with_error(double kappa, double tol = 1e-13) {
    require_positive_kappa(kappa);
    detail::NeckChart c(kappa);
    if (c.total_error > tol) throw NumericsError("half-height quadrature above tolerance", c.total_error);
    return {c.half_height(), c.total_error};
}

inline double half_height_from_kappa(double kappa, double tol = 1e-13) {
    const double h = half_height_with_error(kappa, tol).value;
    if (!(h > 0.0 && h < std::numbers::pi / 2)) throw NumericsError("half-height left (0, pi/2)", h);
    return h;
}

/// Inverse of half_height_from_kappa; h is strictly decreasing in kappa.
inline double kappa_from_half_height(double h, double tol = 1e-12) {
    if (!(h > 0.0 && h < std::numbers::pi / 2)) throw DomainError("half-height must lie in (0, pi/2)");
    double lo = 1e-6, hi = 1e6;
    for (int i = 0; i < 60 && half_height_from_kappa(lo) < h; ++i) lo *= 0.1;
    for (int i = 0; i < 60 && half_height_from_kappa(hi) > h; ++i) hi *= 10.0;
    if (half_height_from_kappa(lo) < h || half_height_from_kappa(hi) > h)
        throw NumericsError("could not bracket kappa for the requested half-height");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double hm = half_height_from_kappa(mid);
        if (hm > h) lo = mid; else hi = mid;
        if (std::abs(hm - h) < 1e-3 * tol || hi / lo - 1.0 < 1e-15) return mid;
    }
    return std::sqrt(lo * hi);
}

struct ProfilePoint {
    double r;
    double rt;  // dr/dt, positive for t > 0
};

/// r(t) and r'(t) at a single height t in [-h, h].
inline ProfilePoint profile_point(double kappa, double t) {
    detail::NeckChart c(kappa);
    const double h = c.half_height();
    if (std::abs(t) > h * (1 + 1e-14)) throw DomainError("height outside the catenoid");
    const double w = c.w_of_t(std::abs(t));
    const double sgn = t < 0 ? -1.0 : 1.0;
    return {c.a * std::cosh(w), sgn * c.speed(w)};
}

inline CatenoidProfile profile(double kappa, int n_nodes) {
    require_positive_kappa(kappa);
    if (n_nodes < 16) throw DomainError("profile needs at least 16 nodes");
    detail::NeckChart c(kappa);
    CatenoidProfile p;
    p.kappa = kappa;
    p.h = c.half_height();
    p.r_min = c.a;
    p.t.resize(n_nodes);
    p.r.resize(n_nodes);
    p.rt.resize(n_nodes);
    const double dt = 2.0 * p.h / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i) p.t[i] = -p.h + i * dt;
    // mirror: node i and n-1-i share |t|
    for (int i = 0; i < (n_nodes + 1) / 2; ++i) {
        const int mirror = n_nodes - 1 - i;
        const double at = std::abs(p.h - i * dt);  // exact |t| for the upper node
        double r, speed;
        if (i == 0) {
            r = 1.0;
            speed = c.speed(c.W);
        } else if (i == mirror) {  // neck node of an odd grid
            p.t[i] = 0.0;
            r = c.a;
            speed = 0.0;
        } else {
            const double w = c.w_of_t(at);
            r = c.a * std::cosh(w);
            speed = c.speed(w);
        }
        p.r[mirror] = r;
        p.r[i] = r;
        p.rt[mirror] = speed;
        p.rt[i] = -speed;
        if (i == mirror) p.rt[i] = 0.0;
    }
    return p;
}

/// max over interior nodes of |kappa^2 - (1-r^2)^2/(4r^2) - (r'/r)^2|, r' by centered differences.
inline double first_integral_residual(const CatenoidProfile& p) {
    const double k2 = p.kappa * p.kappa, dt = p.dt();
    double res = 0.0;
    for (std::size_t i = 1; i + 1 < p.r.size(); ++i) {
        const double r = p.r[i], rp = (p.r[i + 1] - p.r[i - 1]) / (2.0 * dt);
        const double q = (1.0 - r * r) * (1.0 - r * r) / (4.0 * r * r);
        res = std::max(res, std::abs(k2 - q - rp * rp / (r * r)));
    }
    return res;
}

/// u^+_r(1, theta) of the top-end graph: the constant 1/kappa.
inline double graph_normal_trace(double kappa) {
    require_positive_kappa(kappa);
    return 1.0 / kappa;
}

/// Top-end height t(rho) of a fixed catenoid, reusing one quadrature table for many radii.
class CatenoidEnd {
public:
    explicit CatenoidEnd(double kappa) : chart_(kappa) {}

    double kappa() const { return chart_.kappa; }
    double neck() const { return chart_.a; }
    double half_height() const { return chart_.half_height(); }

    /// t(rho) >= 0 for rho in [r_min, 1]
    double height(double rho) const {
        if (rho < chart_.a * (1 - 1e-14) || rho > 1.0) throw DomainError("radius outside [r_min, 1]");
        return chart_.t_of_w(std::acosh(std::max(1.0, rho / chart_.a)));
    }
    /// dt/drho = 1 / r'(t(rho))
    double slope(double rho) const { return 1.0 / chart_.speed(std::acosh(std::max(1.0, rho / chart_.a))); }

    /// Height of the top (+1) or bottom (-1) end of C_{h,z0} above z.
    double dilated_height(const DiskPoint& z0, Complex z, int end_sign) const {
        const Complex pre = mobius_dilation(-z0.z(), z);
        return end_sign * height(std::min(1.0, std::abs(pre)));
    }

private:
    detail::NeckChart chart_;
};

/// Height of the top end over radius rho in [r_min, 1] (centered catenoid): t(rho) >= 0.
inline double end_height(double kappa, double rho) { return CatenoidEnd(kappa).height(rho); }

/// d(end_height)/drho = 1 / r'(t(rho)).
inline double end_slope(double kappa, double rho) { return CatenoidEnd(kappa).slope(rho); }

/// Height of the top (+1) or bottom (-1) end of C_{h,z0} above the point z of the disk.
inline double dilated_end_height(double kappa, const DiskPoint& z0, Complex z, int end_sign) {
    return CatenoidEnd(kappa).dilated_height(z0, z, end_sign);
}

}  // namespace h2r
