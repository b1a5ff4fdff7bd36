#pragma once

// Fluxes of the ends of a minimal annulus with horizontal ends, and the center map.
//
// Each end is a vertical graph t = u(r, theta) near r = 1 and everything here is
// computed from its boundary traces u, u_r, u_theta at r = 1. Sign convention:
// vertical flux is reported as the plain integral of u_r (top of a catenoid gives
// +2 pi / kappa, bottom -2 pi / kappa); the rotational flux carries -/+ and the
// dilation flux +/- for top/bottom. The conservation residuals use the plain
// integrals of both ends, which is the form in which they vanish.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "h2r/catenoid.hpp"
#include "h2r/errors.hpp"
#include "h2r/fourier.hpp"
#include "h2r/geometry.hpp"
#include "h2r/graph_solver.hpp"

namespace h2r {

enum class End { top, bottom };

inline int end_sign(End e) { return e == End::top ? 1 : -1; }
inline const char* end_name(End e) { return e == End::top ? "top" : "bottom"; }

struct EndTrace {
    End end = End::top;
    std::vector<double> u;    // u(1, theta_j)
    std::vector<double> ur;   // u_r(1, theta_j)
    std::vector<double> ut;   // u_theta(1, theta_j)

    int size() const { return static_cast<int>(u.size()); }

    /// u_theta is filled in by spectral differentiation of u.
    static EndTrace from_values(End e, std::vector<double> u, std::vector<double> ur) {
        if (u.size() != ur.size() || u.size() < 4) throw DomainError("trace arrays must match and have >= 4 samples");
        EndTrace t{e, std::move(u), std::move(ur), {}};
        t.ut = spectral_derivative(t.u);
        return t;
    }

    /// theta -> trace(theta - zeta), exact for band-limited samples.
    EndTrace rotated(double zeta) const {
        return {end, spectral_shift(u, zeta), spectral_shift(ur, zeta), spectral_shift(ut, zeta)};
    }
};

namespace detail {

inline void check_trace(const EndTrace& t) {
    if (t.u.size() != t.ur.size() || t.u.size() != t.ut.size() || t.u.empty())
        throw DomainError("inconsistent trace arrays");
}

inline double integral_ur(const EndTrace& t) { return periodic_integral(t.ur); }

inline double integral_ur_ut(const EndTrace& t) {
    std::vector<double> f(t.u.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = t.ur[j] * t.ut[j];
    return periodic_integral(f);
}

inline double integral_ur_ut_sin(const EndTrace& t, double a) {
    const int n = t.size();
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) f[j] = t.ur[j] * t.ut[j] * std::sin(theta_at(j, n) - a);
    return periodic_integral(f);
}

inline double integral_ur_ut_cos(const EndTrace& t, double a) {
    const int n = t.size();
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) f[j] = t.ur[j] * t.ut[j] * std::cos(theta_at(j, n) - a);
    return periodic_integral(f);
}

}  // namespace detail

inline double flux_vertical(const EndTrace& t) {
    detail::check_trace(t);
    return detail::integral_ur(t);
}

inline double flux_rotational(const EndTrace& t) {
    detail::check_trace(t);
    return -end_sign(t.end) * detail::integral_ur_ut(t);
}

inline double flux_dilation(const EndTrace& t, double a) {
    detail::check_trace(t);
    return end_sign(t.end) * detail::integral_ur_ut_sin(t, a);
}

/// Same sign convention, kernel cos(theta - a); used by the angle-addition identity.
inline double flux_dilation_cos(const EndTrace& t, double a) {
    detail::check_trace(t);
    return end_sign(t.end) * detail::integral_ur_ut_cos(t, a);
}

inline std::vector<double> a_grid(int n = 64) { return theta_grid(n); }

struct FluxReport {
    End end = End::top;
    double vertical = 0.0;
    double rotational = 0.0;
    std::vector<double> a;
    std::vector<double> dilation;
};

inline FluxReport flux_report(const EndTrace& t, int n_a = 64) {
    FluxReport r;
    r.end = t.end;
    r.vertical = flux_vertical(t);
    r.rotational = flux_rotational(t);
    r.a = a_grid(n_a);
    for (double a : r.a) r.dilation.push_back(flux_dilation(t, a));
    return r;
}

struct ConservationResiduals {
    double vertical = 0.0;
    double rotational = 0.0;
    double dilation = 0.0;  // max over the a-grid
    // true if flipping the sign of one end would conserve better than the plain sums;
    // flags traces whose orientation is inconsistent with the convention above
    bool orientation_suspect = false;

    double max() const { return std::max({vertical, rotational, dilation}); }
};

inline ConservationResiduals conservation_residuals(const EndTrace& top, const EndTrace& bottom, int n_a = 64) {
    detail::check_trace(top);
    detail::check_trace(bottom);
    if (top.size() != bottom.size()) throw DomainError("end traces must share the theta grid");
    ConservationResiduals c;
    const double vt = detail::integral_ur(top), vb = detail::integral_ur(bottom);
    c.vertical = std::abs(vt + vb);
    c.rotational = std::abs(detail::integral_ur_ut(top) + detail::integral_ur_ut(bottom));
    double flipped = std::abs(vt - vb);
    for (double a : a_grid(n_a)) {
        const double st = detail::integral_ur_ut_sin(top, a), sb = detail::integral_ur_ut_sin(bottom, a);
        c.dilation = std::max(c.dilation, std::abs(st + sb));
    }
    c.orientation_suspect = flipped < c.vertical;
    return c;
}

/// Vertical flux across the circle |z| = r of an end, from samples of u_r and u_theta there.
///   +/- integral of r u_r / sqrt(1 + F (u_r^2 + u_theta^2 / r^2)) dtheta
inline double finite_radius_flux_vertical(double r, const std::vector<double>& ur, const std::vector<double>& ut) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("finite-radius flux needs 0 < r < 1");
    if (ur.size() != ut.size()) throw DomainError("sample arrays must match");
    const double F = metric_F(r);
    std::vector<double> f(ur.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = r * ur[j] / std::sqrt(1.0 + F * (ur[j] * ur[j] + ut[j] * ut[j] / (r * r)));
    return periodic_integral(f);
}

/// u_r and u_theta of an end of C_{h,z0} on the circle |z| = r (r may be 1).
struct EndSamples {
    std::vector<double> u, ur, ut;
};

inline EndSamples catenoid_end_samples(const CatenoidEnd& cat, const DiskPoint& z0, End e, double r, int ntheta,
                                       double step = 1e-3) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("radius must lie in (0, 1]");
    EndSamples s;
    s.u.resize(ntheta);
    s.ur.resize(ntheta);
    const int sg = end_sign(e);
    for (int j = 0; j < ntheta; ++j) {
        const Complex dir = std::polar(1.0, theta_at(j, ntheta));
        auto f = [&](double rho) { return cat.dilated_height(z0, rho * dir, sg); };
        s.u[j] = f(r);
        if (r == 1.0) {
            // one-sided, fourth order
            s.ur[j] = (25 * f(1.0) - 48 * f(1 - step) + 36 * f(1 - 2 * step) - 16 * f(1 - 3 * step) +
                       3 * f(1 - 4 * step)) / (12 * step);
        } else {
            s.ur[j] = (-f(r + 2 * step) + 8 * f(r + step) - 8 * f(r - step) + f(r - 2 * step)) / (12 * step);
        }
    }
    s.ut = spectral_derivative(s.u);
    return s;
}

/// Boundary trace of an end of the dilated catenoid T_{z0}(C_h), pulled back numerically.
inline EndTrace catenoid_end_trace(double kappa, const DiskPoint& z0, End e, int ntheta) {
    const CatenoidEnd cat(kappa);
    auto s = catenoid_end_samples(cat, z0, e, 1.0, ntheta);
    // the boundary value is the constant +/-h; spectral u_theta of it is round-off
    return {e, std::move(s.u), std::move(s.ur), std::move(s.ut)};
}

/// Closed-form trace of an end of the centered catenoid: u = +/-h, u_r = +/-1/kappa.
inline EndTrace catenoid_exact_trace(double kappa, End e, int ntheta) {
    const double sg = end_sign(e);
    const double h = half_height_from_kappa(kappa);
    return {e, std::vector<double>(ntheta, sg * h), std::vector<double>(ntheta, sg * graph_normal_trace(kappa)),
            std::vector<double>(ntheta, 0.0)};
}

struct CenterReport {
    double f0 = 0.0, f1 = 0.0, f2 = 0.0;
    double G0 = 0.0, G1 = 0.0, G2 = 0.0;
    DiskPoint center;
};

/// Strict inequality u_r^- - v_r^- < 0 at every sample.
inline bool membership_check(const std::vector<double>& bottom_ur, const std::vector<double>& disk_ur) {
    if (bottom_ur.size() != disk_ur.size()) throw DomainError("traces must share the theta grid");
    for (std::size_t j = 0; j < bottom_ur.size(); ++j)
        if (!(bottom_ur[j] - disk_ur[j] < 0.0)) return false;
    return true;
}

inline CenterReport center(const EndTrace& bottom, const std::vector<double>& disk_ur) {
    detail::check_trace(bottom);
    if (bottom.end != End::bottom) throw DomainError("the center is defined from the bottom end");
    if (!membership_check(bottom.ur, disk_ur))
        throw DomainError("u_r^- - v_r^- is not strictly negative; the center may leave the disk");
    const int n = bottom.size();
    std::vector<double> d(n), dc(n), ds(n);
    for (int j = 0; j < n; ++j) {
        const double th = theta_at(j, n);
        d[j] = bottom.ur[j] - disk_ur[j];
        dc[j] = d[j] * std::cos(th);
        ds[j] = d[j] * std::sin(th);
    }
    CenterReport c;
    c.f0 = periodic_integral(d);
    c.f1 = periodic_integral(dc);
    c.f2 = periodic_integral(ds);
    c.G0 = c.f0 - 1.0 / c.f0;
    c.G1 = c.f1 / c.f0;
    c.G2 = c.f2 / c.f0;
    c.center = DiskPoint(c.G1, c.G2);
    return c;
}

inline CenterReport center(const EndTrace& bottom, const GraphSolution& disk) {
    return center(bottom, disk.normal_trace);
}

}  // namespace h2r
