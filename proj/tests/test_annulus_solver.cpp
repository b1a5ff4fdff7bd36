#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "h2r/acceptance.hpp"
#include "h2r/annulus_solver.hpp"
#include "h2r/jacobi.hpp"

using namespace h2r;

namespace {
CurvePair catenoid_pair(double h) { return {BoundaryCurve::constant(h), BoundaryCurve::constant(-h)}; }
}  // namespace

TEST(Annulus, ChartRejectsCoarseGrids) {
    EXPECT_THROW(build_chart(1.0, 17, 16), DomainError);
    EXPECT_THROW(build_chart(1.6, 65, 64), DomainError);
    EXPECT_NO_THROW(build_chart(1.0, 41, 40));
}

TEST(Annulus, CatenoidIsACriticalPoint) {
    const auto c = build_chart(1.0, 49, 48);
    const auto r = residual(c, std::vector<double>(c.num_nodes(), 0.0));
    EXPECT_LT(r.lpNorm<Eigen::Infinity>(), 1e-8);
    const auto s = newton_solve(c, catenoid_pair(1.0), 2);
    EXPECT_EQ(s.iterations, 0);
}

TEST(Annulus, GradientMatchesFiniteDifferenceOfArea) {
    const auto c = build_chart(0.8, 41, 40);
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    std::vector<double> u(c.num_nodes());
    for (auto& x : u) x = 1e-3 * nd(rng);
    const auto g = area_gradient(c, u);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> d(c.num_nodes());
        for (auto& x : d) x = nd(rng);
        // the discrete area is ~600, so plain central differences drown in round-off;
        // two Richardson levels on top of them give a sixth-order stencil at a safe step
        auto D = [&](double s) {
            auto up = u, um = u;
            for (int k = 0; k < c.num_nodes(); ++k) {
                up[k] += s * d[k];
                um[k] -= s * d[k];
            }
            return (discrete_area(c, up) - discrete_area(c, um)) / (2 * s);
        };
        const double s = 4e-4, d1 = D(s), d2 = D(s / 2), d4 = D(s / 4);
        const double fd = (16 * (4 * d4 - d2) / 3 - (4 * d2 - d1) / 3) / 15;
        const double an = g.dot(Eigen::Map<const Eigen::VectorXd>(d.data(), c.num_nodes()));
        // relative to |g|, the rms of the directional derivative over Gaussian directions
        EXPECT_LT(std::abs(an - fd), 1e-6 * g.norm()) << an << " vs " << fd;
    }
}

TEST(Annulus, SymmetricSolveConservesFluxes) {
    const auto run = acceptance::solve_symmetric_annulus(1.0, 65, 64, 0.02);
    EXPECT_LT(run.sol.residual_norm, 1e-10);
    const auto res = conservation_residuals(run.sol.top, run.sol.bottom);
    EXPECT_LT(res.max(), 1e-4);
    EXPECT_FALSE(res.orientation_suspect);
    for (int j = 0; j < run.chart.ntheta; ++j)
        EXPECT_NEAR(run.sol.top.u[j], run.pair.top(run.chart.theta(j)), 1e-12);
}

TEST(Annulus, RejectsDataThatBreaksTheRequestedSymmetry) {
    const auto c = build_chart(1.0, 49, 48);
    const CurvePair p{BoundaryCurve({{0, 1.0, 0.0}, {1, 0.01, 0.0}}), BoundaryCurve::constant(-1.0)};
    EXPECT_THROW(newton_solve(c, p, 2), DomainError);
    const CurvePair far{BoundaryCurve({{0, 1.0, 0.0}, {2, 0.5, 0.0}}), BoundaryCurve::constant(-1.0)};
    EXPECT_THROW(newton_solve(c, far, 2), DomainError);
}

TEST(Annulus, UnsymmetricLinearizationIsNearlySingular) {
    const auto c = build_chart(1.0, 65, 64);
    const CurvePair p{BoundaryCurve({{0, 1.0, 0.0}, {1, 0.01, 0.0}}), BoundaryCurve::constant(-1.0)};
    try {
        newton_solve(c, p);
        FAIL() << "expected SingularLinearization";
    } catch (const SingularLinearization& e) {
        EXPECT_GE(e.singular_values().size(), 2u);
    }
    AnnulusOptions o;
    o.least_squares = true;
    const auto s = newton_solve(c, p, std::nullopt, o);
    EXPECT_LT(s.residual_norm, 1e-10);
    EXPECT_EQ(s.near_kernel.size(), 4u);
}

TEST(Annulus, TwoVanishingSingularValuesUnderRefinement) {
    const auto nk = near_kernel_study(1.0, 41, 40, 3);
    EXPECT_EQ(nk.vanishing, 2);
}

TEST(Annulus, DilationFieldIsInTheDiscreteKernel) {
    // phi(r(t)) cos(theta) in the region where the perturbation direction is the catenoid normal
    std::vector<double> res;
    for (int N : {48, 96}) {
        const auto c = build_chart(1.0, N + 1, N);
        const auto L = linearization_at_zero(c);
        const auto phi = dilation_field(c.base);
        const auto y = mode_action(c, L, 1, phi);
        double m = 0.0;
        for (int i = 1; i + 1 < c.nt; ++i)
            if (c.blend[i] == 0 && c.blend[i - 1] == 0 && c.blend[i + 1] == 0) m = std::max(m, std::abs(y[i]));
        res.push_back(m / max_abs(phi));
    }
    // second-order truncation error, ~1e-2 at 96 rows
    EXPECT_GT(res[0] / res[1], 3.5) << res[0] << ' ' << res[1];
    EXPECT_LT(res[1], 2e-2);
}

TEST(Annulus, ConditionGrowsLikeTheGridSquared) {
    const double k1 = condition_estimate(build_chart(1.0, 49, 48), 2);
    const double k2 = condition_estimate(build_chart(1.0, 97, 96), 2);
    EXPECT_LE(k2 / k1, 4.0);
    EXPECT_GT(k2 / k1, 3.0);
}
