#pragma once

// Minimal annuli near a catenoid C_h, written as normal graphs X0 + u n over the
// catenoid on a uniform (t, theta) grid of [-h, h] x [0, 2 pi).
//
// n is the unit normal nu of the catenoid in the middle and is bent smoothly to
// the vertical near the ends (-E3 at the top, +E3 at the bottom, so n.nu > 0),
// which makes the last rows vertical graphs over the disk. The discrete equation
// is the gradient of the discrete area with its value at u = 0 subtracted: the
// discrete catenoid is minimal only up to O(grid^2), and the subtraction makes
// u = 0 the exact solution for catenoid data without changing the linearization.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "h2r/catenoid.hpp"
#include "h2r/curves.hpp"
#include "h2r/errors.hpp"
#include "h2r/flux.hpp"
#include "h2r/graph_solver.hpp"
#include "h2r/jet.hpp"
#include "h2r/sparse_linalg.hpp"
#include "h2r/surface_area.hpp"

namespace h2r {

class AnnulusChart {
public:
    CatenoidProfile base;
    double kappa = 1.0;
    double h = 0.0;
    double delta = 0.0;  // blend width
    int nt = 0;          // rows, including the two boundary rows
    int ntheta = 0;
    // per row: blend weight, catenoid normal and field n as (radial, vertical) coordinate components
    std::vector<double> blend, nu_rad, nu_t, n_rad, n_t, J;
    Eigen::VectorXd grad0;  // area gradient at u = 0

    double dt() const { return base.dt(); }
    double dtheta() const { return 2.0 * std::numbers::pi / ntheta; }
    int num_nodes() const { return nt * ntheta; }
    int node(int i, int j) const { return i * ntheta + ((j % ntheta) + ntheta) % ntheta; }
    double theta(int j) const { return theta_at(j, ntheta); }
    bool is_dirichlet(int k) const { return k < ntheta || k >= (nt - 1) * ntheta; }
    /// maps the discrete Hessian of area to the undivided Jacobi operator scale
    double scale() const { return kappa / (dt() * dtheta()); }

    SpacePoint<double> base_point(int i, int j) const {
        const double th = theta(j);
        return {base.r[i] * std::cos(th), base.r[i] * std::sin(th), base.t[i]};
    }
};

struct AnnulusOptions {
    double tol = 1e-10;
    int max_iterations = 30;
    int max_backtracks = 20;
    double data_radius = 0.1;     // sup distance of the curves from the catenoid's
    // an eigenvalue of the scaled linearization is treated as a discretized kernel element
    // below singular_factor * (dt^2 + kappa^2 dtheta^2), the size of the truncation error
    double singular_factor = 5.0;
    bool least_squares = false;   // deflate the near-kernel instead of reporting it
};

namespace detail {

inline double smoothstep5(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

struct AnnulusAssembly {
    double area = 0.0;
    Eigen::VectorXd gradient;
    SparseMatrix hessian;
};

inline SpacePoint<Jet<4>> moved_point(const AnnulusChart& c, int i, int j, const Jet<4>& u) {
    const double th = c.theta(j), ct = std::cos(th), st = std::sin(th);
    return {c.base.r[i] * ct + u * (c.n_rad[i] * ct), c.base.r[i] * st + u * (c.n_rad[i] * st),
            c.base.t[i] + u * c.n_t[i]};
}

inline AnnulusAssembly assemble_annulus(const AnnulusChart& c, const std::vector<double>& u, bool want_hessian) {
    AnnulusAssembly a;
    const int n = c.num_nodes();
    a.gradient = Eigen::VectorXd::Zero(n);
    std::vector<Triplet> trip;
    if (want_hessian) trip.reserve(static_cast<std::size_t>(16) * n);
    for (int i = 0; i + 1 < c.nt; ++i) {
        for (int j = 0; j < c.ntheta; ++j) {
            const std::array<int, 4> ids{c.node(i, j), c.node(i + 1, j), c.node(i + 1, j + 1), c.node(i, j + 1)};
            const std::array<int, 4> ri{i, i + 1, i + 1, i}, rj{j, j, j + 1, j + 1};
            std::array<SpacePoint<Jet<4>>, 4> v;
            for (int k = 0; k < 4; ++k) v[k] = moved_point(c, ri[k], rj[k], Jet<4>::variable(k, u[ids[k]]));
            const Jet<4> A = quad_area(v);
            a.area += A.v;
            for (int p = 0; p < 4; ++p) {
                a.gradient[ids[p]] += A.g[p];
                if (!want_hessian) continue;
                for (int q = 0; q < 4; ++q) trip.emplace_back(ids[p], ids[q], A.hess(p, q));
            }
        }
    }
    if (want_hessian) {
        a.hessian.resize(n, n);
        a.hessian.setFromTriplets(trip.begin(), trip.end());
    }
    return a;
}

}  // namespace detail

/// ntheta angular nodes, nt rows in t (including both boundary rows). delta <= 0 picks h/8,
/// widened on coarse grids so that three rows are vertical at each end.
inline AnnulusChart build_chart(double h, int nt, int ntheta, double delta = -1.0) {
    if (!(h > 0.0 && h < std::numbers::pi / 2)) throw DomainError("half-height must lie in (0, pi/2)");
    if (nt < 9 || ntheta < 4) throw DomainError("annulus grid needs nt >= 9 and ntheta >= 4");
    if (delta <= 0.0) delta = std::max(h / 8.0, 4.1 * 2.0 * h / (nt - 1));
    if (!(delta < h / 4.0)) throw DomainError("blend width must be below h/4");
    AnnulusChart c;
    c.kappa = kappa_from_half_height(h);
    c.base = profile(c.kappa, nt);
    c.h = c.base.h;
    c.delta = delta;
    c.nt = nt;
    c.ntheta = ntheta;
    c.blend.resize(nt);
    c.nu_rad.resize(nt);
    c.nu_t.resize(nt);
    c.n_rad.resize(nt);
    c.n_t.resize(nt);
    c.J.resize(nt);
    for (int i = 0; i < nt; ++i) {
        const double t = c.base.t[i], r = c.base.r[i], rt = c.base.rt[i];
        const double s = detail::smoothstep5((std::abs(t) - (c.h - delta)) / (0.5 * delta));
        const double vertical = t < 0 ? 1.0 : -1.0;
        const double F = metric_F(r);
        c.blend[i] = (i == 0 || i == nt - 1) ? 1.0 : s;
        // nu = ((1-r^2)^2/(4 kappa r)) (cos, sin) - r'/(kappa r) E3, unit for g
        c.nu_rad[i] = (1 - r * r) * (1 - r * r) / (4 * c.kappa * r);
        c.nu_t[i] = -rt / (c.kappa * r);
        if (c.blend[i] == 1.0) {
            c.n_rad[i] = 0.0;
            c.n_t[i] = vertical;
            c.J[i] = c.nu_t[i] * vertical;
            continue;
        }
        const double mr = (1 - s) * c.nu_rad[i], mt = (1 - s) * c.nu_t[i] + s * vertical;
        const double norm = std::sqrt(mr * mr / F + mt * mt);
        c.n_rad[i] = mr / norm;
        c.n_t[i] = mt / norm;
        c.J[i] = c.n_rad[i] * c.nu_rad[i] / F + c.n_t[i] * c.nu_t[i];
    }
    c.grad0 = detail::assemble_annulus(c, std::vector<double>(c.num_nodes(), 0.0), false).gradient;
    return c;
}

/// Total discrete area (diverges with refinement; differences are meaningful).
inline double discrete_area(const AnnulusChart& c, const std::vector<double>& u) {
    return detail::assemble_annulus(c, u, false).area;
}

/// Raw gradient of the discrete area in the nodal values of u.
inline Eigen::VectorXd area_gradient(const AnnulusChart& c, const std::vector<double>& u) {
    return detail::assemble_annulus(c, u, false).gradient;
}

/// Scaled, base-corrected gradient; zero on the Dirichlet rows.
inline Eigen::VectorXd residual(const AnnulusChart& c, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != c.num_nodes()) throw DomainError("u has the wrong size");
    Eigen::VectorXd r = (area_gradient(c, u) - c.grad0) * c.scale();
    for (int k = 0; k < c.num_nodes(); ++k)
        if (c.is_dirichlet(k)) r[k] = 0.0;
    return r;
}

/// Interior-node linearization at u = 0, scaled so that where n = nu it approximates
/// d_t^2 + kappa^2 d_theta^2 + (r^-2 + r^2)/2 (the undivided Jacobi operator).
struct LinearizedOperator {
    SparseMatrix matrix;     // free x free, rows t_1 .. t_{nt-2}
    std::vector<int> free;   // node index of each row
    double scale = 1.0;
};

namespace detail {

inline std::vector<int> annulus_free(const AnnulusChart& c) {
    std::vector<int> f;
    for (int k = 0; k < c.num_nodes(); ++k)
        if (!c.is_dirichlet(k)) f.push_back(k);
    return f;
}

// Columns of P sum the nodes of each R_m orbit; reduced index of free node (i, j).
inline int reduced_index(const AnnulusChart& c, int k, int m) {
    const int period = c.ntheta / m;
    const int i = k / c.ntheta, j = k % c.ntheta;
    return (i - 1) * period + j % period;
}

inline SparseMatrix reduce(const AnnulusChart& c, const SparseMatrix& H, int m) {
    const int period = c.ntheta / m, nr = (c.nt - 2) * period;
    std::vector<Triplet> trip;
    for (int col = 0; col < H.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(H, col); it; ++it) {
            const int a = static_cast<int>(it.row()), b = static_cast<int>(it.col());
            if (c.is_dirichlet(a) || c.is_dirichlet(b)) continue;
            trip.emplace_back(reduced_index(c, a, m), reduced_index(c, b, m), it.value());
        }
    SparseMatrix out(nr, nr);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

inline Eigen::VectorXd reduce(const AnnulusChart& c, const Eigen::VectorXd& v, int m) {
    const int period = c.ntheta / m;
    Eigen::VectorXd out = Eigen::VectorXd::Zero((c.nt - 2) * period);
    for (int k = 0; k < c.num_nodes(); ++k)
        if (!c.is_dirichlet(k)) out[reduced_index(c, k, m)] += v[k];
    return out;
}

}  // namespace detail

inline LinearizedOperator linearization_at_zero(const AnnulusChart& c) {
    const auto a = detail::assemble_annulus(c, std::vector<double>(c.num_nodes(), 0.0), true);
    LinearizedOperator L;
    L.free = detail::annulus_free(c);
    L.scale = c.scale();
    L.matrix = detail::reduce(c, a.hessian, 1) * (-c.scale());
    return L;
}

/// Same operator restricted to R_m-invariant functions (sums over orbits).
inline SparseMatrix symmetric_linearization(const AnnulusChart& c, int m) {
    if (m < 1 || c.ntheta % m != 0) throw DomainError("symmetry order must divide ntheta");
    const auto a = detail::assemble_annulus(c, std::vector<double>(c.num_nodes(), 0.0), true);
    return detail::reduce(c, a.hessian, m) * (-c.scale() / m);
}

/// Dirichlet values of u on the two boundary rows for a curve pair.
inline std::vector<double> boundary_values(const AnnulusChart& c, const CurvePair& pair, End e) {
    const int row = e == End::top ? c.nt - 1 : 0;
    const auto g = (e == End::top ? pair.top : pair.bottom).samples(c.ntheta);
    std::vector<double> out(c.ntheta);
    for (int j = 0; j < c.ntheta; ++j) out[j] = (g[j] - c.base.t[row]) / c.n_t[row];
    return out;
}

/// Extension e of the boundary data: per Fourier mode the solution of
/// (d_t^2 - kappa^2 k^2) v = 0 with the given end values.
inline std::vector<double> extension(const AnnulusChart& c, const CurvePair& pair) {
    const auto top = BoundaryCurve::from_samples(boundary_values(c, pair, End::top));
    const auto bot = BoundaryCurve::from_samples(boundary_values(c, pair, End::bottom));
    const double H = c.h;
    // sinh(x) / sinh(X) for 0 <= x <= X without overflow
    auto ratio = [](double x, double X) {
        if (X == 0.0) return 0.0;
        return std::exp(x - X) * (-std::expm1(-2 * x)) / (-std::expm1(-2 * X));
    };
    std::vector<double> u(c.num_nodes(), 0.0);
    for (int i = 0; i < c.nt; ++i) {
        const double t = c.base.t[i];
        for (const auto* curve : {&top, &bot}) {
            const bool is_top = curve == &top;
            for (const auto& term : curve->terms()) {
                double w;
                if (term.k == 0) {
                    w = is_top ? (t + H) / (2 * H) : (H - t) / (2 * H);
                } else {
                    const double kk = c.kappa * term.k;
                    w = is_top ? ratio(kk * (t + H), 2 * kk * H) : ratio(kk * (H - t), 2 * kk * H);
                }
                if (w == 0.0) continue;
                for (int j = 0; j < c.ntheta; ++j) {
                    const double th = c.theta(j);
                    u[c.node(i, j)] += w * (term.a * std::cos(term.k * th) + term.b * std::sin(term.k * th));
                }
            }
        }
    }
    // pin the boundary rows to the sampled data exactly
    const auto bt = boundary_values(c, pair, End::top), bb = boundary_values(c, pair, End::bottom);
    for (int j = 0; j < c.ntheta; ++j) {
        u[c.node(c.nt - 1, j)] = bt[j];
        u[c.node(0, j)] = bb[j];
    }
    return u;
}

struct AnnulusSolution {
    std::vector<double> u;
    double residual_norm = 0.0;
    std::vector<double> residual_history;
    int iterations = 0;
    int symmetry = 1;
    EndTrace top, bottom;
    std::vector<double> near_kernel;  // smallest |eigenvalues| seen when the check ran
};

/// Vertical-graph trace of an end: U = t + u n_t on the last three rows, which lie
/// where n is vertical; u_r by the second-order one-sided stencil on the nonuniform r nodes.
inline EndTrace end_trace(const AnnulusChart& c, const std::vector<double>& u, End e) {
    const int s = e == End::top ? -1 : 1;
    const int i0 = e == End::top ? c.nt - 1 : 0;
    std::array<int, 3> rows{i0, i0 + s, i0 + 2 * s};
    for (int row : rows)
        if (c.blend[row] != 1.0) throw DomainError("blend region too thin for end-trace extraction");
    const double x0 = c.base.r[rows[0]], x1 = c.base.r[rows[1]], x2 = c.base.r[rows[2]];
    const double w0 = 1 / (x0 - x1) + 1 / (x0 - x2);
    const double w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1));
    std::vector<double> U(c.ntheta), Ur(c.ntheta);
    for (int j = 0; j < c.ntheta; ++j) {
        std::array<double, 3> v;
        for (int k = 0; k < 3; ++k) v[k] = c.base.t[rows[k]] + u[c.node(rows[k], j)] * c.n_t[rows[k]];
        U[j] = v[0];
        Ur[j] = w0 * v[0] + w1 * v[1] + w2 * v[2];
    }
    return EndTrace::from_values(e, std::move(U), std::move(Ur));
}

inline bool is_rm_invariant(const BoundaryCurve& g, int m, double tol = 1e-12) {
    const auto amp = g.amplitudes();
    for (std::size_t k = 0; k < amp.size(); ++k)
        if (static_cast<int>(k) % m != 0 && amp[k] > tol) return false;
    return true;
}

inline AnnulusSolution newton_solve(const AnnulusChart& c, const CurvePair& pair, std::optional<int> symmetry = std::nullopt,
                                    const AnnulusOptions& opts = {}) {
    const int m = symmetry.value_or(1);
    if (m < 1 || c.ntheta % m != 0) throw DomainError("symmetry order must divide ntheta");
    if (m > 1 && !(is_rm_invariant(pair.top, m) && is_rm_invariant(pair.bottom, m)))
        throw DomainError("boundary curves are not invariant under the requested rotation");
    {
        double dist = 0.0;
        for (double v : boundary_values(c, pair, End::top)) dist = std::max(dist, std::abs(v));
        for (double v : boundary_values(c, pair, End::bottom)) dist = std::max(dist, std::abs(v));
        if (dist > opts.data_radius) throw DomainError("boundary data too far from the catenoid");
    }
    AnnulusSolution sol;
    sol.symmetry = m;
    sol.u = extension(c, pair);
    const auto fr = detail::annulus_free(c);
    auto full_res = [&](const Eigen::VectorXd& grad) {
        Eigen::VectorXd r = (grad - c.grad0) * c.scale();
        for (int k = 0; k < c.num_nodes(); ++k)
            if (c.is_dirichlet(k)) r[k] = 0.0;
        return r;
    };
    auto asm_ = detail::assemble_annulus(c, sol.u, true);
    Eigen::VectorXd R = full_res(asm_.gradient);
    double res = R.lpNorm<Eigen::Infinity>();
    sol.residual_history.push_back(res);
    Eigen::MatrixXd deflate;
    bool checked = false;
    Eigen::SparseLU<SparseMatrix> lu;
    while (res > opts.tol) {
        if (sol.iterations >= opts.max_iterations)
            throw NonConvergence("annulus Newton did not converge", sol.residual_history);
        SparseMatrix H = detail::reduce(c, asm_.hessian, m) * (c.scale() / m);
        Eigen::VectorXd r = detail::reduce(c, R, m) / m;
        if (m == 1 && !checked) {
            const auto ev = smallest_magnitude_eigenpairs(H, 4);
            sol.near_kernel = ev.values;
            checked = true;
            int small = 0;
            const double tol = opts.singular_factor *
                               (c.dt() * c.dt() + c.kappa * c.kappa * c.dtheta() * c.dtheta());
            while (small < 4 && std::abs(ev.values[small]) < tol) ++small;
            if (small > 0) {
                if (!opts.least_squares)
                    throw SingularLinearization("linearization has a near-kernel; use an R_m symmetry or least squares",
                                                ev.values);
                deflate = ev.vectors.leftCols(small);
            }
        }
        lu.compute(H);
        if (lu.info() != Eigen::Success) throw NumericsError("annulus Hessian factorization failed");
        if (deflate.cols() > 0) r -= deflate * (deflate.transpose() * r);
        Eigen::VectorXd step = lu.solve(-r);
        if (deflate.cols() > 0) step -= deflate * (deflate.transpose() * step);
        const double r0 = r.norm();
        double s = 1.0;
        std::vector<double> trial;
        Eigen::VectorXd Rt;
        for (int bt = 0;; ++bt) {
            trial = sol.u;
            for (int k : fr) trial[k] += s * step[detail::reduced_index(c, k, m)];
            try {
                Rt = full_res(detail::assemble_annulus(c, trial, false).gradient);
                Eigen::VectorXd rt = detail::reduce(c, Rt, m) / m;
                if (deflate.cols() > 0) rt -= deflate * (deflate.transpose() * rt);
                if (rt.norm() <= (1.0 - 1e-4 * s) * r0) break;
            } catch (const DomainError&) {
                // step left the disk; shorten it
            }
            if (bt >= opts.max_backtracks)
                throw NonConvergence("annulus Newton line search stalled", sol.residual_history);
            s *= 0.5;
        }
        sol.u = std::move(trial);
        asm_ = detail::assemble_annulus(c, sol.u, true);
        R = full_res(asm_.gradient);
        res = R.lpNorm<Eigen::Infinity>();
        if (deflate.cols() > 0) {
            Eigen::VectorXd rr = detail::reduce(c, R, m) / m;
            res = (rr - deflate * (deflate.transpose() * rr)).lpNorm<Eigen::Infinity>();
        }
        sol.residual_history.push_back(res);
        ++sol.iterations;
    }
    sol.residual_norm = res;
    sol.top = end_trace(c, sol.u, End::top);
    sol.bottom = end_trace(c, sol.u, End::bottom);
    return sol;
}

/// Strict u_r^- < v_r^- against the minimal disk spanning the bottom curve.
inline bool membership_check(const AnnulusSolution& sol, const GraphSolution& disk) {
    return membership_check(sol.bottom.ur, disk.normal_trace);
}

/// Mode-n action of the scaled linearization on v(t) cos(n theta), projected back onto
/// cos(n theta); one value per interior row.
inline std::vector<double> mode_action(const AnnulusChart& c, const LinearizedOperator& L, int n,
                                       const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != c.nt) throw DomainError("profile vector must have one value per row");
    Eigen::VectorXd x(static_cast<int>(L.free.size()));
    for (std::size_t a = 0; a < L.free.size(); ++a) {
        const int k = L.free[a];
        x[static_cast<int>(a)] = v[k / c.ntheta] * std::cos(n * c.theta(k % c.ntheta));
    }
    // Dirichlet rows enter through the coupling to the boundary values
    const auto a0 = detail::assemble_annulus(c, std::vector<double>(c.num_nodes(), 0.0), true);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(c.num_nodes());
    for (int j = 0; j < c.ntheta; ++j) {
        full[c.node(0, j)] = v[0] * std::cos(n * c.theta(j));
        full[c.node(c.nt - 1, j)] = v[c.nt - 1] * std::cos(n * c.theta(j));
    }
    const Eigen::VectorXd bnd = a0.hessian * full * (-c.scale());
    Eigen::VectorXd y = L.matrix * x;
    std::vector<double> out(c.nt, 0.0);
    const double norm = n == 0 ? 1.0 / c.ntheta : 2.0 / c.ntheta;
    for (std::size_t a = 0; a < L.free.size(); ++a) {
        const int k = L.free[a];
        out[k / c.ntheta] += (y[static_cast<int>(a)] + bnd[k]) * std::cos(n * c.theta(k % c.ntheta)) * norm;
    }
    return out;
}

struct NearKernelReport {
    std::vector<int> nt, ntheta;
    std::vector<std::vector<double>> smallest;  // per level, |eigenvalues| ascending
    int vanishing = 0;
};

/// Smallest |eigenvalues| of the unsymmetric linearization over refinement levels
/// (rows and columns doubled each level). A value counts as vanishing if it drops by
/// a factor >= 3 per level, the second-order signature of a discretized kernel.
inline NearKernelReport near_kernel_study(double h, int nt0, int ntheta0, int levels = 3, int count = 4) {
    NearKernelReport rep;
    for (int l = 0; l < levels; ++l) {
        const int nt = (nt0 - 1) * (1 << l) + 1, nth = ntheta0 * (1 << l);
        const auto c = build_chart(h, nt, nth);
        const auto L = linearization_at_zero(c);
        const auto ev = smallest_magnitude_eigenpairs(L.matrix, count);
        std::vector<double> v;
        for (double x : ev.values) v.push_back(std::abs(x));
        std::sort(v.begin(), v.end());
        rep.nt.push_back(nt);
        rep.ntheta.push_back(nth);
        rep.smallest.push_back(v);
    }
    for (int k = 0; k < count; ++k) {
        bool vanish = true;
        for (int l = 1; l < levels; ++l)
            if (!(rep.smallest[l - 1][k] >= 3.0 * rep.smallest[l][k])) vanish = false;
        if (vanish) ++rep.vanishing;
    }
    return rep;
}

/// |lambda|_max / |lambda|_min of the R_m-restricted scaled linearization.
inline double condition_estimate(const AnnulusChart& c, int m) {
    const SparseMatrix A = symmetric_linearization(c, m);
    const double lo = std::abs(smallest_magnitude_eigenpairs(A, 1).values[0]);
    return spectral_radius(A) / lo;
}

}  // namespace h2r
