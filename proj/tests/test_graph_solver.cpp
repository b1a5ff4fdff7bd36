#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "h2r/catenoid.hpp"
#include "h2r/fourier.hpp"
#include "h2r/graph_solver.hpp"

using namespace h2r;

TEST(Graph, ConstantDataIsSolvedAtInit) {
    const PolarGrid g(32, 32);
    const auto s = solve_minimal_graph(BoundaryCurve::constant(0.7), g);
    EXPECT_EQ(s.iterations, 0);
    for (double u : s.u) EXPECT_NEAR(u, 0.7, 1e-14);
}

TEST(Graph, BoundaryTraceIsExact) {
    const BoundaryCurve q({{0, 0.1, 0.0}, {1, 0.3, 0.2}, {3, 0.05, 0.0}});
    const PolarGrid g(32, 48);
    const auto s = solve_minimal_graph(q, g);
    for (int j = 0; j < g.ntheta(); ++j) EXPECT_EQ(s.boundary_trace[j], q(g.theta(j)));
    EXPECT_LT(s.residual_norm, 1e-10);
}

TEST(Graph, SmallDataFollowsTheLinearization) {
    const double eps = 1e-3;
    const BoundaryCurve lin({{1, eps, 0.0}});
    std::vector<double> C;
    for (int N : {32, 64}) {
        const PolarGrid g(N, N);
        const auto s = solve_minimal_graph(lin, g);
        const auto ul = linearized_graph_solution(lin, g);
        double d = 0.0;
        for (int k = 0; k < g.num_nodes(); ++k) d = std::max(d, std::abs(s.u[k] - ul[k]));
        C.push_back(d / (eps * eps));
    }
    EXPECT_GT(C[1] / C[0], 0.5);
    EXPECT_LT(C[1] / C[0], 2.0);
}

TEST(Graph, DiskHasNoVerticalFlux) {
    const BoundaryCurve q({{0, 0.1, 0.0}, {1, 0.3, 0.2}, {2, 0.1, -0.4}});
    const auto s = solve_minimal_graph(q, PolarGrid(64, 64));
    EXPECT_LT(std::abs(periodic_integral(s.normal_trace)), 1e-4);
    for (double f : ring_fluxes(s)) EXPECT_LT(std::abs(f), 1e-3);
}

TEST(Graph, HarmonicInitializationIsTheLaplaceSolution) {
    const PolarGrid g(64, 64);
    const auto u = harmonic_init(BoundaryCurve({{2, 1.0, 0.0}}), g);
    double err = 0.0;
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ntheta(); ++j) {
            const double r = g.radius(i);
            err = std::max(err, std::abs(u[g.node(i, j)] - r * r * std::cos(2 * g.theta(j))));
        }
    EXPECT_LT(err, 1e-3);
}

TEST(Graph, CatenoidEndOverAnAnnulus) {
    // the top end of C_h over r0 <= |z| <= 1 is a minimal graph with u_r(1) = 1/kappa
    const double kappa = 1.0, R = 0.6;
    const double h = half_height_from_kappa(kappa);
    const PolarGrid g(64, 64, R);
    const auto s = solve_minimal_graph(BoundaryCurve::constant(h), g, {}, BoundaryCurve::constant(end_height(kappa, R)));
    for (double ur : s.normal_trace) EXPECT_NEAR(ur, 1.0 / kappa, 1e-3);
}

TEST(Graph, EnergyGradientMatchesFiniteDifferences) {
    const PolarGrid g(12, 16);
    std::vector<double> u(g.num_nodes());
    for (int k = 0; k < g.num_nodes(); ++k) u[k] = 0.2 * std::sin(0.37 * k);
    const auto e = graph_energy(g, u, true);
    for (int k : {0, 5, 40, 100}) {
        auto up = u, um = u;
        const double s = 1e-6;
        up[k] += s;
        um[k] -= s;
        const double fd = (graph_energy(g, up, false).value - graph_energy(g, um, false).value) / (2 * s);
        EXPECT_NEAR(e.gradient[k], fd, 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Graph, IterationCapRaisesNonConvergence) {
    NewtonOptions o;
    o.max_iterations = 0;
    try {
        solve_minimal_graph(BoundaryCurve({{1, 0.5, 0.0}}), PolarGrid(16, 16), o);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_EQ(e.history().size(), 1u);
    }
}

TEST(Graph, NewtonConvergesQuadratically) {
    const auto s = solve_minimal_graph(BoundaryCurve({{1, 0.5, 0.0}, {2, 0.3, 0.0}}), PolarGrid(32, 32));
    const auto& h = s.residual_history;
    ASSERT_GE(h.size(), 3u);
    const std::size_t n = h.size();
    if (h[n - 1] > 1e-12) EXPECT_LT(h[n - 1] / (h[n - 2] * h[n - 2]), 1e3);
    EXPECT_LT(h.back(), 1e-10);
}

TEST(Graph, ZeroAndHarmonicStartsAgree) {
    const BoundaryCurve q({{0, 0.2, 0.0}, {1, 0.4, -0.1}, {2, 0.0, 0.3}});
    const PolarGrid g(32, 32);
    const auto a = solve_minimal_graph(q, g);
    const auto b = solve_minimal_graph(q, g, {}, std::nullopt, std::vector<double>(g.num_nodes(), 0.0));
    EXPECT_GT(b.iterations, 0);
    for (int k = 0; k < g.num_nodes(); ++k) EXPECT_NEAR(a.u[k], b.u[k], 1e-10);
}

TEST(Graph, RotatedDataGivesTheRotatedSolution) {
    const BoundaryCurve q({{0, 0.1, 0.0}, {1, 0.3, 0.2}, {3, 0.05, -0.1}});
    const int nth = 40, shift = 7;
    const PolarGrid g(24, nth);
    const auto a = solve_minimal_graph(q, g);
    const auto b = solve_minimal_graph(q.rotated(2 * std::numbers::pi * shift / nth), g);
    for (int i = 1; i < g.nr(); ++i)
        for (int j = 0; j < nth; ++j) EXPECT_NEAR(b.u[g.node(i, (j + shift) % nth)], a.u[g.node(i, j)], 1e-12);
}
