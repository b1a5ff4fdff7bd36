#pragma once

// The twelve acceptance criteria as runnable checks. Shared by the acceptance test
// binary and `h2r verify-all`. Each check measures its own wall time against its budget.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "h2r/annulus_solver.hpp"
#include "h2r/catenoid.hpp"
#include "h2r/flux.hpp"
#include "h2r/graph_solver.hpp"
#include "h2r/jacobi.hpp"
#include "h2r/obstruction.hpp"
#include "h2r/tallrect.hpp"

namespace h2r::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double budget = 0.0;
    std::string detail;
};

namespace detail {

class Checker {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            if (!failures_.empty()) failures_ += "; ";
            failures_ += what;
        }
    }
    void note(const std::string& s) {
        if (!notes_.empty()) notes_ += "; ";
        notes_ += s;
    }
    bool pass() const { return pass_; }
    std::string detail() const { return pass_ ? notes_ : "FAILED: " + failures_ + (notes_.empty() ? "" : " | " + notes_); }

private:
    bool pass_ = true;
    std::string failures_, notes_;
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// wraps a body: timing, budget, and exceptions count as failures
inline CriterionResult run(int id, const std::string& title, double budget,
                           const std::function<void(Checker&, double& excluded)>& body) {
    CriterionResult r{id, title, false, 0.0, budget, ""};
    Checker c;
    double excluded = 0.0;  // setup time not charged to the budget
    const auto t0 = Clock::now();
    try {
        body(c, excluded);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = since(t0) - excluded;
    c.require(r.seconds < budget, "runtime " + fmt(r.seconds) + " s over budget " + fmt(budget) + " s");
    r.pass = c.pass();
    r.detail = c.detail();
    return r;
}

}  // namespace detail

using detail::fmt;

inline CriterionResult criterion1() {
    return detail::run(1, "catenoid first integral", 1.0, [](detail::Checker& c, double&) {
        for (double kappa : {0.3, 0.75, 1.0, 3.0}) {
            const double scale = std::max(1.0, kappa * kappa);
            const double r512 = first_integral_residual(profile(kappa, 512)) / scale;
            const double r1024 = first_integral_residual(profile(kappa, 1024)) / scale;
            c.require(r512 < 1e-4, "kappa " + fmt(kappa) + " residual " + fmt(r512));
            c.require(r512 / r1024 >= 3.5, "kappa " + fmt(kappa) + " refinement ratio " + fmt(r512 / r1024));
            c.note("k=" + fmt(kappa) + ": " + fmt(r512) + " (x" + fmt(r512 / r1024) + ")");
        }
    });
}

inline CriterionResult criterion2() {
    return detail::run(2, "neck radius", 1.0, [](detail::Checker& c, double&) {
        for (double kappa : {0.3, 0.75, 1.0, 3.0}) {
            const double err = std::abs(profile_point(kappa, 0.0).r - (std::sqrt(1 + kappa * kappa) - kappa));
            c.require(err < 1e-8, "kappa " + fmt(kappa) + " error " + fmt(err));
            c.note("k=" + fmt(kappa) + ": " + fmt(err));
        }
        c.require(neck_radius(0.75) == 0.5, "neck_radius(0.75) != 0.5");
    });
}

inline CriterionResult criterion3() {
    return detail::run(3, "kappa <-> h bijection", 5.0, [](detail::Checker& c, double&) {
        for (double h : {0.3, 0.8, 1.4}) {
            const double err = std::abs(half_height_from_kappa(kappa_from_half_height(h)) - h);
            c.require(err < 1e-8, "h " + fmt(h) + " round trip " + fmt(err));
            c.note("h=" + fmt(h) + ": " + fmt(err));
        }
        double prev = std::numbers::pi / 2;
        for (double lk = -4.0; lk <= 4.0; lk += 0.5) {
            const double h = half_height_from_kappa(std::pow(10.0, lk));
            c.require(h > 0.0 && h < std::numbers::pi / 2, "h out of (0, pi/2) at kappa 1e" + fmt(lk));
            c.require(h < prev, "h not decreasing at kappa 1e" + fmt(lk));
            prev = h;
        }
    });
}

inline CriterionResult criterion4() {
    return detail::run(4, "Jacobi kernel", 30.0, [](detail::Checker& c, double&) {
        for (double kappa : {0.3, 1.0, 3.0}) {
            const auto rep = kernel_spectrum(kappa, 4);
            c.require(rep.kernel_dimension == 2, "kappa " + fmt(kappa) + " kernel dimension " +
                                                     std::to_string(rep.kernel_dimension));
            c.require(rep.modes[2].trend == ModeTrend::stable_nonzero, "kappa " + fmt(kappa) + " mode 2 not stable");
            const auto kf = known_field_residuals(profile(kappa, 512));
            c.require(kf.res_phi < 1e-3, "kappa " + fmt(kappa) + " phi residual " + fmt(kf.res_phi));
            c.require(kf.res_translation < 1e-3, "kappa " + fmt(kappa) + " r'/r residual " + fmt(kf.res_translation));
            c.note("k=" + fmt(kappa) + ": dim " + std::to_string(rep.kernel_dimension) + ", n=2 min " +
                   fmt(rep.modes[2].smallest.back()) + ", res " + fmt(kf.res_phi) + "/" + fmt(kf.res_translation));
        }
    });
}

inline CriterionResult criterion5() {
    return detail::run(5, "fluxes", 1.0, [](detail::Checker& c, double&) {
        const int n = 128;
        for (double kappa : {0.5, 1.0, 2.0}) {
            const auto top = catenoid_exact_trace(kappa, End::top, n);
            const double ev = std::abs(flux_vertical(top) - 2 * std::numbers::pi / kappa);
            c.require(ev < 1e-10, "vertical flux error " + fmt(ev));
            double other = std::abs(flux_rotational(top));
            for (double a : a_grid()) other = std::max(other, std::abs(flux_dilation(top, a)));
            c.require(other < 1e-12, "rotational/dilation flux " + fmt(other));
        }
        // the homology class: circles |z| = rho around the neck
        const double kappa = 1.0;
        const CatenoidEnd cat(kappa);
        double worst = 0.0;
        for (double rho : {0.5, 0.6, 0.7, 0.8, 0.9}) {
            const auto s = catenoid_end_samples(cat, DiskPoint(0.0, 0.0), End::top, rho, n);
            worst = std::max(worst, std::abs(finite_radius_flux_vertical(rho, s.ur, s.ut) - 2 * std::numbers::pi / kappa));
        }
        c.require(worst < 1e-6, "finite-radius flux variation " + fmt(worst));
        c.note("finite-radius spread " + fmt(worst));
    });
}

/// Solved annulus shared by criteria 6 and 9.
struct AnnulusRun {
    AnnulusChart chart;
    CurvePair pair;
    AnnulusSolution sol;
    double seconds = 0.0;
};

inline AnnulusRun solve_symmetric_annulus(double h = 1.0, int nt = 97, int ntheta = 96, double eps = 0.05) {
    const auto t0 = detail::Clock::now();
    AnnulusRun r{build_chart(h, nt, ntheta), {}, {}, 0.0};
    r.pair = {BoundaryCurve({{0, h, 0.0}, {2, eps, 0.0}}), BoundaryCurve({{0, -h, 0.0}, {2, eps, 0.0}})};
    r.sol = newton_solve(r.chart, r.pair, 2);
    r.seconds = detail::since(t0);
    return r;
}

inline CriterionResult criterion6(const AnnulusRun* shared = nullptr) {
    return detail::run(6, "flux conservation", 1.0, [&](detail::Checker& c, double& excluded) {
        for (double kappa : {0.5, 1.0, 3.0}) {
            const auto res = conservation_residuals(catenoid_exact_trace(kappa, End::top, 128),
                                                    catenoid_exact_trace(kappa, End::bottom, 128));
            c.require(res.max() < 1e-12, "exact catenoid residual " + fmt(res.max()));
        }
        std::optional<AnnulusRun> own;
        if (!shared) {
            const auto t0 = detail::Clock::now();
            own = solve_symmetric_annulus();
            excluded += detail::since(t0);
            shared = &*own;
        }
        const auto res = conservation_residuals(shared->sol.top, shared->sol.bottom);
        c.require(res.vertical < 1e-4 && res.rotational < 1e-4 && res.dilation < 1e-4,
                  "solved annulus residuals " + fmt(res.vertical) + "/" + fmt(res.rotational) + "/" + fmt(res.dilation));
        c.note("solved annulus: " + fmt(res.vertical) + "/" + fmt(res.rotational) + "/" + fmt(res.dilation));
    });
}

inline CriterionResult criterion7() {
    return detail::run(7, "graph solver", 60.0, [](detail::Checker& c, double&) {
        const PolarGrid g128(128, 128);
        const auto s0 = solve_minimal_graph(BoundaryCurve::constant(0.7), g128);
        c.require(s0.iterations == 0, "constant data needed " + std::to_string(s0.iterations) + " Newton steps");
        const double eps = 1e-3;
        const BoundaryCurve lin({{1, eps, 0.0}});
        std::vector<double> C;
        for (int N : {64, 128}) {
            const PolarGrid g(N, N);
            const auto s = solve_minimal_graph(lin, g);
            const auto ul = linearized_graph_solution(lin, g);
            double d = 0.0;
            for (int k = 0; k < g.num_nodes(); ++k) d = std::max(d, std::abs(s.u[k] - ul[k]));
            C.push_back(d / (eps * eps));
        }
        const double ratio = C[1] / std::max(C[0], 1e-300);
        c.require(std::isfinite(C[1]) && ratio > 0.5 && ratio < 2.0, "C not stable: " + fmt(C[0]) + " -> " + fmt(C[1]));
        c.note("C = " + fmt(C[0]) + " -> " + fmt(C[1]));
        const BoundaryCurve q({{0, 0.1, 0.0}, {1, 0.3, 0.2}, {2, 0.1, -0.4}, {3, 0.05, 0.0}});
        const auto sq = solve_minimal_graph(q, g128);
        const double flux = std::abs(periodic_integral(sq.normal_trace));
        c.require(flux < 1e-4, "disk flux " + fmt(flux));
        c.note("disk flux " + fmt(flux));
    });
}

inline CriterionResult criterion8() {
    return detail::run(8, "center map", 10.0, [](detail::Checker& c, double&) {
        const int n = 128;
        const double kappa = 1.0;
        const std::vector<double> flat(n, 0.0);  // bottom curve is constant: the spanning disk is a slice
        const std::vector<std::complex<double>> z0s{0.0, 0.3, std::polar(0.5, std::numbers::pi / 3)};
        for (const auto& z0 : z0s) {
            const auto tr = catenoid_end_trace(kappa, DiskPoint(z0), End::bottom, n);
            const auto cr = center(tr, flat);
            const double err = std::abs(cr.center.z() - z0);
            c.require(err < 1e-4, "center error " + fmt(err));
            c.note("z0=" + fmt(std::abs(z0)) + ": " + fmt(err));
            const double zeta = 0.7;
            const auto rc = center(tr.rotated(zeta), flat);
            const double eq = std::abs(rc.center.z() - std::polar(1.0, zeta) * cr.center.z());
            c.require(eq < 1e-10, "rotation equivariance " + fmt(eq));
        }
        // perturbed traces: whenever membership holds the center is in the disk
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> U(-0.3, 0.3);
        int accepted = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const auto base = catenoid_end_trace(kappa, DiskPoint(std::polar(0.4, 1.0 * trial)), End::bottom, n);
            std::vector<double> ur = base.ur;
            const double a1 = U(rng), b1 = U(rng), a2 = U(rng);
            for (int j = 0; j < n; ++j) {
                const double th = theta_at(j, n);
                ur[j] += a1 * std::cos(th) + b1 * std::sin(th) + a2 * std::cos(2 * th);
            }
            if (!membership_check(ur, flat)) continue;
            ++accepted;
            const auto cr = center(EndTrace::from_values(End::bottom, base.u, ur), flat);
            c.require(cr.center.radius() < 1.0, "center left the disk");
        }
        c.note(std::to_string(accepted) + " perturbed inputs passed membership");
    });
}

inline CriterionResult criterion9(const AnnulusRun* shared = nullptr) {
    return detail::run(9, "annulus solver", 120.0, [&](detail::Checker& c, double& excluded) {
        const double h = 1.0;
        const auto chart = build_chart(h, 97, 96);
        const CurvePair flat{BoundaryCurve::constant(h), BoundaryCurve::constant(-h)};
        const auto s0 = newton_solve(chart, flat, 2);
        c.require(s0.iterations == 0 && max_abs(s0.u) < 1e-12, "constant data moved the catenoid");
        std::optional<AnnulusRun> own;
        if (!shared) {
            own = solve_symmetric_annulus(h);
            shared = &*own;
        } else {
            excluded -= shared->seconds;  // the shared solve counts against this budget
        }
        const auto& sol = shared->sol;
        const auto& hist = sol.residual_history;
        // quadratic tail: r_{k+1} <= K r_k^2 with a bounded K, judged on steps that land
        // above the round-off floor
        const double K = 10.0;
        bool quad = hist.size() >= 3;
        std::string orders;
        for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
            if (hist[k + 1] < 1e-11) break;
            const double ratio = hist[k + 1] / (hist[k] * hist[k]);
            orders += fmt(ratio) + " ";
            if (ratio > K) quad = false;
        }
        c.require(quad, "Newton tail not quadratic (r_k+1 / r_k^2 = " + orders + ")");
        double berr = 0.0;
        for (int j = 0; j < shared->chart.ntheta; ++j) {
            const double th = shared->chart.theta(j);
            berr = std::max(berr, std::abs(sol.top.u[j] - shared->pair.top(th)));
            berr = std::max(berr, std::abs(sol.bottom.u[j] - shared->pair.bottom(th)));
        }
        c.require(berr < 1e-10, "boundary curves reproduced to " + fmt(berr));
        const auto res = conservation_residuals(sol.top, sol.bottom);
        c.require(res.max() < 1e-4, "conservation residual " + fmt(res.max()));
        bool singular = false;
        try {
            newton_solve(chart, {BoundaryCurve({{0, h, 0.0}, {1, 0.01, 0.0}}), BoundaryCurve::constant(-h)});
        } catch (const SingularLinearization&) {
            singular = true;
        }
        c.require(singular, "unsymmetric data did not report the near-kernel");
        const auto nk = near_kernel_study(h, 41, 40, 3);
        c.require(nk.vanishing == 2, "vanishing singular values: " + std::to_string(nk.vanishing));
        c.note("history " + fmt(hist.front()) + " .. " + fmt(hist.back()) + " in " + std::to_string(sol.iterations) +
               " steps, r_k+1/r_k^2 " + orders + "; vanishing " + std::to_string(nk.vanishing) + " (" +
               fmt(nk.smallest[0][0]) + " -> " + fmt(nk.smallest.back()[0]) + ")");
    });
}

/// Relative mismatch between the annulus linearization and the mode-1 Jacobi operator on rows
/// where the perturbation direction is the catenoid normal.
inline double linearization_mismatch(const AnnulusChart& c, const LinearizedOperator& L, const std::vector<double>& v,
                                     int n = 1) {
    const auto y = mode_action(c, L, n, v);
    const auto z = assemble_mode_operator(c.base, n).apply(v);
    double err = 0.0, mag = 0.0;
    for (int i = 1; i + 1 < c.nt; ++i) {
        if (c.blend[i] > 0 || c.blend[i - 1] > 0 || c.blend[i + 1] > 0) continue;
        err = std::max(err, std::abs(y[i] - z[i]));
        mag = std::max(mag, std::abs(z[i]));
    }
    return err / mag;
}

/// Smooth random profile on the chart rows: sum of a few sines with seeded coefficients.
inline std::vector<double> random_profile(const AnnulusChart& c, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> coef(4);
    for (double& x : coef) x = nd(rng);
    std::vector<double> v(c.nt);
    for (int i = 0; i < c.nt; ++i) {
        const double x = (c.base.t[i] + c.h) / (2 * c.h);
        v[i] = 0.0;
        for (int k = 0; k < 4; ++k) v[i] += coef[k] * std::sin((k + 1) * std::numbers::pi * x);
    }
    return v;
}

inline CriterionResult criterion10() {
    return detail::run(10, "linearization cross-check", 30.0, [](detail::Checker& c, double&) {
        const double h = 1.0;
        const auto c1 = build_chart(h, 49, 48), c2 = build_chart(h, 97, 96);
        const auto L1 = linearization_at_zero(c1), L2 = linearization_at_zero(c2);
        double worst = 0.0, worst_ratio = INFINITY;
        for (unsigned s = 0; s < 10; ++s) {
            const double e1 = linearization_mismatch(c1, L1, random_profile(c1, s));
            const double e2 = linearization_mismatch(c2, L2, random_profile(c2, s));
            worst = std::max(worst, e2);
            worst_ratio = std::min(worst_ratio, e1 / e2);
        }
        c.require(worst < 0.05, "relative mismatch " + fmt(worst));
        c.require(worst_ratio > 3.0, "mismatch shrinks only x" + fmt(worst_ratio) + " per level");
        c.note("mismatch " + fmt(worst) + ", ratio >= " + fmt(worst_ratio));
    });
}

inline CriterionResult criterion11() {
    return detail::run(11, "tall rectangles", 60.0, [](detail::Checker& c, double&) {
        for (double d : {1.1, 2.0, 5.0}) {
            const TallRectParams p(d);
            const double H = tall_rectangle_height(p);
            c.require(H > std::numbers::pi, "height " + fmt(H) + " at d " + fmt(d));
            const double t0 = p.theta0();
            double worst = 0.0;
            for (auto [r, frac] : std::vector<std::pair<double, double>>{
                     {0.5, 0.5}, {0.1, 0.2}, {0.9, 0.9}, {0.3, 0.05}, {0.7, 0.7}}) {
                const double a = area_sigma1(r, frac * t0, p), b = sigma1_surface_quadrature(r, frac * t0, p);
                worst = std::max(worst, std::abs(a - b) / std::abs(b));
            }
            c.require(worst < 1e-5, "A1 mismatch " + fmt(worst) + " at d " + fmt(d));
            const TallRectParams pn(d, 2 * smallest_positive_slope_n(d));
            const double f2 = ratio_f(1e-2, pn), f3 = ratio_f(1e-3, pn);
            const double lim = (10 * f3 - f2) / 9;  // linear Richardson in theta
            c.require(std::abs(lim - 1) < 1e-3, "f -> " + fmt(lim));
            const auto w = verify_not_minimizing(d);
            c.require(w.f_value - w.error_bound > 1.0, "witness not certified");
            c.require(w.A1 > w.A2 + w.A3, "areas do not compare");
            c.note("d=" + fmt(d) + ": 2l(0)=" + fmt(H) + ", A1 " + fmt(worst) + ", f(0)~" + fmt(lim) + ", n=" +
                   std::to_string(w.n) + " f=" + fmt(w.f_value));
        }
    });
}

inline CriterionResult criterion12() {
    return detail::run(12, "obstruction gates", 1.0, [](detail::Checker& c, double&) {
        const double pi = std::numbers::pi;
        auto r1 = obstruction_report({BoundaryCurve::constant(pi / 2 + 0.05), BoundaryCurve::constant(-pi / 2 - 0.05)});
        c.require(r1.verdict == Verdict::NotFillableGap, std::string("gap pi+0.1: ") + verdict_name(r1.verdict));
        auto r2 = obstruction_report({BoundaryCurve::constant(0.5), BoundaryCurve::constant(-0.5)});
        c.require(r2.verdict == Verdict::GatePassed && r2.gap.catenoid && std::abs(r2.gap.catenoid->h - 0.5) < 1e-15,
                  "gap 1 did not pass with the catenoid witness");
        auto r3 = obstruction_report({BoundaryCurve({{0, 1.0, 0.0}, {1, 0.3, 0.0}}),
                                      BoundaryCurve({{0, -1.0, 0.0}, {1, -0.3, 0.0}})});
        c.require(r3.verdict == Verdict::NotFillableTilt, std::string("tilted pair: ") + verdict_name(r3.verdict));
        for (int k : {1, 2, 3}) {
            const CurvePair p{BoundaryCurve({{0, 0.5, 0.0}, {k, 0.1, 0.0}}), BoundaryCurve({{0, -0.5, 0.0}, {k, 0.0, 0.1}})};
            const auto w = admissibility(p);
            c.require(w.admissible && w.winding == k, "winding for k=" + std::to_string(k) + " is " +
                                                          std::to_string(w.winding));
        }
    });
}

inline std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    out.push_back(criterion1());
    out.push_back(criterion2());
    out.push_back(criterion3());
    out.push_back(criterion4());
    out.push_back(criterion5());
    std::optional<AnnulusRun> shared;
    try {
        shared = solve_symmetric_annulus();
    } catch (const std::exception&) {
        // criteria 6 and 9 re-run the solve and report the failure themselves
    }
    out.push_back(criterion6(shared ? &*shared : nullptr));
    out.push_back(criterion7());
    out.push_back(criterion8());
    out.push_back(criterion9(shared ? &*shared : nullptr));
    out.push_back(criterion10());
    out.push_back(criterion11());
    out.push_back(criterion12());
    return out;
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.title << ")  " << fmt(r.seconds) << " s / "
       << fmt(r.budget) << " s  " << r.detail;
    return os.str();
}

}  // namespace h2r::acceptance
