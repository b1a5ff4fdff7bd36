#pragma once

// Minimal vertical graphs t = u(z) over the disk (or over an annulus R <= |z| <= 1)
// with prescribed values on the boundary rings. The discrete equation is the
// exact gradient of the discrete area, so Newton uses the exact Hessian.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "h2r/curves.hpp"
#include "h2r/errors.hpp"
#include "h2r/fourier.hpp"
#include "h2r/jet.hpp"
#include "h2r/surface_area.hpp"

namespace h2r {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Nr rings on [r_inner, 1]; with r_inner = 0 the first ring collapses to a single center node.
class PolarGrid {
public:
    PolarGrid(int nr, int ntheta, double r_inner = 0.0) : nr_(nr), nt_(ntheta), r0_(r_inner) {
        if (nr < 3 || ntheta < 4) throw DomainError("polar grid needs nr >= 3 and ntheta >= 4");
        if (!(r_inner >= 0.0 && r_inner < 1.0)) throw DomainError("inner radius must lie in [0, 1)");
    }

    int nr() const { return nr_; }
    int ntheta() const { return nt_; }
    double r_inner() const { return r0_; }
    bool has_center() const { return r0_ == 0.0; }
    double dr() const { return (1.0 - r0_) / (nr_ - 1); }
    double dtheta() const { return 2.0 * std::numbers::pi / nt_; }
    double radius(int i) const { return i == nr_ - 1 ? 1.0 : r0_ + i * dr(); }
    double theta(int j) const { return theta_at(j, nt_); }

    int num_nodes() const { return has_center() ? 1 + (nr_ - 1) * nt_ : nr_ * nt_; }
    int node(int i, int j) const {
        j = ((j % nt_) + nt_) % nt_;
        if (has_center()) return i == 0 ? 0 : 1 + (i - 1) * nt_ + j;
        return i * nt_ + j;
    }
    std::array<double, 2> xy(int i, int j) const {
        const double r = radius(i), th = theta(j);
        return {r * std::cos(th), r * std::sin(th)};
    }
    bool is_dirichlet(int node_index) const {
        if (node_index >= num_nodes() - nt_) return true;
        return !has_center() && node_index < nt_;
    }

private:
    int nr_, nt_;
    double r0_;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iterations = 50;
    int max_backtracks = 30;
};

struct GraphSolution {
    PolarGrid grid{3, 4};
    std::vector<double> u;
    std::vector<double> boundary_trace;
    std::vector<double> normal_trace;
    double residual_norm = 0.0;
    int iterations = 0;
    std::vector<double> residual_history;

    double at(int i, int j) const { return u[grid.node(i, j)]; }
};

struct GraphEnergy {
    double value = 0.0;
    Eigen::VectorXd gradient;
    SparseMatrix hessian;
};

/// Area excess of the graph and its exact derivatives in all nodal values.
inline GraphEnergy graph_energy(const PolarGrid& g, const std::vector<double>& u, bool want_hessian = true) {
    const int n = g.num_nodes();
    GraphEnergy e;
    e.gradient = Eigen::VectorXd::Zero(n);
    std::vector<Triplet> trip;
    auto scatter = [&](const auto& jet, const auto& ids) {
        e.value += jet.v;
        const std::size_t m = ids.size();
        for (std::size_t a = 0; a < m; ++a) {
            e.gradient[ids[a]] += jet.g[a];
            if (!want_hessian) continue;
            for (std::size_t b = 0; b < m; ++b) trip.emplace_back(ids[a], ids[b], jet.hess(a, b));
        }
    };
    const int nt = g.ntheta();
    int first_band = 0;
    if (g.has_center()) {
        const std::array<double, 2> c{0.0, 0.0};
        for (int j = 0; j < nt; ++j) {
            const std::array<int, 3> ids{0, g.node(1, j), g.node(1, j + 1)};
            const auto e3 = graph_triangle_excess(c, g.xy(1, j), g.xy(1, j + 1), Jet<3>::variable(0, u[ids[0]]),
                                                  Jet<3>::variable(1, u[ids[1]]), Jet<3>::variable(2, u[ids[2]]));
            scatter(e3, ids);
        }
        first_band = 1;
    }
    for (int i = first_band; i + 1 < g.nr(); ++i) {
        for (int j = 0; j < nt; ++j) {
            const std::array<int, 4> ids{g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
            const std::array<std::array<double, 2>, 4> xy{g.xy(i, j), g.xy(i + 1, j), g.xy(i + 1, j + 1), g.xy(i, j + 1)};
            std::array<Jet<4>, 4> uj;
            for (int k = 0; k < 4; ++k) uj[k] = Jet<4>::variable(k, u[ids[k]]);
            scatter(graph_quad_excess(xy, uj), ids);
        }
    }
    if (want_hessian) {
        e.hessian.resize(n, n);
        e.hessian.setFromTriplets(trip.begin(), trip.end());
    }
    return e;
}

namespace detail {

inline std::vector<int> free_nodes(const PolarGrid& g) {
    std::vector<int> f;
    for (int k = 0; k < g.num_nodes(); ++k)
        if (!g.is_dirichlet(k)) f.push_back(k);
    return f;
}

inline void set_dirichlet(const PolarGrid& g, std::vector<double>& u, const BoundaryCurve& outer,
                          const std::optional<BoundaryCurve>& inner) {
    for (int j = 0; j < g.ntheta(); ++j) {
        u[g.node(g.nr() - 1, j)] = outer(g.theta(j));
        if (!g.has_center()) u[g.node(0, j)] = inner ? (*inner)(g.theta(j)) : 0.0;
    }
}

// gradient entries scale with the cell size; dividing by dr dtheta gives PDE units
inline double inf_norm_free(const PolarGrid& g, const Eigen::VectorXd& grad, const std::vector<int>& fr) {
    double m = 0.0;
    for (int k : fr) m = std::max(m, std::abs(grad[k]));
    return m / (g.dr() * g.dtheta());
}

inline SparseMatrix restrict_matrix(const SparseMatrix& H, const std::vector<int>& fr, int n) {
    std::vector<int> pos(n, -1);
    for (std::size_t a = 0; a < fr.size(); ++a) pos[fr[a]] = static_cast<int>(a);
    std::vector<Triplet> trip;
    for (int c = 0; c < H.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(H, c); it; ++it)
            if (pos[it.row()] >= 0 && pos[it.col()] >= 0) trip.emplace_back(pos[it.row()], pos[it.col()], it.value());
    SparseMatrix out(static_cast<int>(fr.size()), static_cast<int>(fr.size()));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

}  // namespace detail

/// Five-point polar Laplace solve; the center node is the mean of the first ring.
inline std::vector<double> harmonic_init(const BoundaryCurve& gamma, const PolarGrid& g,
                                         const std::optional<BoundaryCurve>& inner = std::nullopt) {
    const int n = g.num_nodes(), nt = g.ntheta();
    std::vector<double> u(n, 0.0);
    detail::set_dirichlet(g, u, gamma, inner);
    const auto fr = detail::free_nodes(g);
    std::vector<int> pos(n, -1);
    for (std::size_t a = 0; a < fr.size(); ++a) pos[fr[a]] = static_cast<int>(a);
    std::vector<Triplet> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<int>(fr.size()));
    auto add = [&](int row, int col, double w) {
        if (pos[col] >= 0) trip.emplace_back(row, pos[col], w);
        else rhs[row] -= w * u[col];
    };
    const double dr = g.dr(), dth = g.dtheta();
    for (int k : fr) {
        const int row = pos[k];
        if (g.has_center() && k == 0) {
            add(row, 0, 1.0);
            for (int j = 0; j < nt; ++j) add(row, g.node(1, j), -1.0 / nt);
            continue;
        }
        const int i = g.has_center() ? 1 + (k - 1) / nt : k / nt;
        const int j = g.has_center() ? (k - 1) % nt : k % nt;
        const double r = g.radius(i), rp = r + 0.5 * dr, rm = r - 0.5 * dr;
        const double cr = 1.0 / (r * dr * dr), ct = 1.0 / (r * r * dth * dth);
        add(row, k, -(rp + rm) * cr - 2.0 * ct);
        add(row, g.node(i + 1, j), rp * cr);
        add(row, g.node(i - 1, j), rm * cr);  // the center node when i == 1
        add(row, g.node(i, j + 1), ct);
        add(row, g.node(i, j - 1), ct);
    }
    SparseMatrix A(static_cast<int>(fr.size()), static_cast<int>(fr.size()));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SparseMatrix> lu(A);
    if (lu.info() != Eigen::Success) throw NumericsError("harmonic initialization: factorization failed");
    const Eigen::VectorXd x = lu.solve(rhs);
    for (std::size_t a = 0; a < fr.size(); ++a) u[fr[a]] = x[static_cast<int>(a)];
    return u;
}

/// Solution of the discrete problem linearized at u = 0 (the area Hessian there).
/// Minimal graphs with data eps gamma differ from it by O(eps^3).
inline std::vector<double> linearized_graph_solution(const BoundaryCurve& gamma, const PolarGrid& g) {
    const int n = g.num_nodes();
    const auto e = graph_energy(g, std::vector<double>(n, 0.0));
    std::vector<double> u(n, 0.0);
    detail::set_dirichlet(g, u, gamma, std::nullopt);
    const auto fr = detail::free_nodes(g);
    const Eigen::VectorXd ub = Eigen::Map<const Eigen::VectorXd>(u.data(), n);
    const Eigen::VectorXd b = e.hessian * ub;  // free entries of ub are zero
    Eigen::VectorXd rhs(static_cast<int>(fr.size()));
    for (std::size_t a = 0; a < fr.size(); ++a) rhs[static_cast<int>(a)] = -b[fr[a]];
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(detail::restrict_matrix(e.hessian, fr, n));
    if (ldlt.info() != Eigen::Success) throw NumericsError("linearized graph problem: factorization failed");
    const Eigen::VectorXd x = ldlt.solve(rhs);
    for (std::size_t a = 0; a < fr.size(); ++a) u[fr[a]] = x[static_cast<int>(a)];
    return u;
}

/// One-sided second-order radial derivative at the outer ring.
inline std::vector<double> normal_trace(const PolarGrid& g, const std::vector<double>& u) {
    std::vector<double> out(g.ntheta());
    const int N = g.nr() - 1;
    for (int j = 0; j < g.ntheta(); ++j)
        out[j] = (3.0 * u[g.node(N, j)] - 4.0 * u[g.node(N - 1, j)] + u[g.node(N - 2, j)]) / (2.0 * g.dr());
    return out;
}

inline std::vector<double> normal_trace(const GraphSolution& sol) { return normal_trace(sol.grid, sol.u); }

/// Newton on the free nodes. `initial` overrides the harmonic start (its boundary values are reset).
inline GraphSolution solve_minimal_graph(const BoundaryCurve& gamma, const PolarGrid& g, const NewtonOptions& opts = {},
                                         const std::optional<BoundaryCurve>& inner = std::nullopt,
                                         const std::optional<std::vector<double>>& initial = std::nullopt) {
    GraphSolution sol;
    sol.grid = g;
    sol.u = initial ? *initial : harmonic_init(gamma, g, inner);
    if (static_cast<int>(sol.u.size()) != g.num_nodes()) throw DomainError("initial guess has wrong size");
    detail::set_dirichlet(g, sol.u, gamma, inner);
    const auto fr = detail::free_nodes(g);
    const int nf = static_cast<int>(fr.size());

    auto e = graph_energy(g, sol.u);
    double res = detail::inf_norm_free(g, e.gradient, fr);
    sol.residual_history.push_back(res);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    while (res > opts.tol) {
        if (sol.iterations >= opts.max_iterations)
            throw NonConvergence("graph Newton did not converge", sol.residual_history);
        Eigen::VectorXd r(nf);
        for (int a = 0; a < nf; ++a) r[a] = e.gradient[fr[a]];
        const SparseMatrix H = detail::restrict_matrix(e.hessian, fr, g.num_nodes());
        ldlt.compute(H);
        if (ldlt.info() != Eigen::Success) throw NumericsError("graph Hessian factorization failed");
        const Eigen::VectorXd step = ldlt.solve(-r);
        const double r0 = r.norm();
        double s = 1.0;
        std::vector<double> trial;
        GraphEnergy et;
        int bt = 0;
        for (;; ++bt) {
            trial = sol.u;
            for (int a = 0; a < nf; ++a) trial[fr[a]] += s * step[a];
            et = graph_energy(g, trial, false);
            double rn = 0.0;
            for (int k : fr) rn += et.gradient[k] * et.gradient[k];
            if (std::sqrt(rn) <= (1.0 - 1e-4 * s) * r0) break;
            if (bt >= opts.max_backtracks)
                throw NonConvergence("graph Newton line search stalled", sol.residual_history);
            s *= 0.5;
        }
        sol.u = std::move(trial);
        e = graph_energy(g, sol.u);
        res = detail::inf_norm_free(g, e.gradient, fr);
        sol.residual_history.push_back(res);
        ++sol.iterations;
    }
    sol.residual_norm = res;
    const int N = g.nr() - 1;
    sol.boundary_trace.resize(g.ntheta());
    for (int j = 0; j < g.ntheta(); ++j) sol.boundary_trace[j] = sol.u[g.node(N, j)];
    sol.normal_trace = normal_trace(g, sol.u);
    return sol;
}

/// Conormal flux  integral of u_r / sqrt(1 + F |grad u|^2) r dtheta  across the circle midway
/// between rings i and i+1 (i >= 1 on the disk). Constant in i for a solution up to O(grid^2).
inline double ring_flux(const GraphSolution& sol, int i) {
    const auto& g = sol.grid;
    const int nt = g.ntheta();
    const double r = 0.5 * (g.radius(i) + g.radius(i + 1));
    const double F = 0.25 * std::pow(1.0 - r * r, 2);
    double s = 0.0;
    for (int j = 0; j < nt; ++j) {
        const double ur = (sol.at(i + 1, j) - sol.at(i, j)) / g.dr();
        const double ut = 0.25 * (sol.at(i + 1, j + 1) - sol.at(i + 1, j - 1) + sol.at(i, j + 1) - sol.at(i, j - 1)) /
                          g.dtheta();
        s += ur / std::sqrt(1.0 + F * (ur * ur + ut * ut / (r * r))) * r;
    }
    return s * g.dtheta();
}

inline std::vector<double> ring_fluxes(const GraphSolution& sol) {
    std::vector<double> out;
    for (int i = sol.grid.has_center() ? 1 : 0; i + 1 < sol.grid.nr(); ++i) out.push_back(ring_flux(sol, i));
    return out;
}

}  // namespace h2r
