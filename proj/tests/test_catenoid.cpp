#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "h2r/catenoid.hpp"
#include "h2r/flux.hpp"

using namespace h2r;
constexpr double pi = std::numbers::pi;

TEST(NeckRadius, ClosedForms) {
    EXPECT_EQ(neck_radius(0.75), 0.5);
    EXPECT_NEAR(neck_radius(1.0), std::sqrt(2.0) - 1.0, 1e-15);
    EXPECT_NEAR(neck_radius(1e-9), 1.0, 1e-8);
    EXPECT_THROW(neck_radius(0.0), DomainError);
    EXPECT_THROW(neck_radius(-1.0), DomainError);
    EXPECT_GT(neck_radius(0.5), neck_radius(0.6));
}

// Oracle: the defining integral evaluated with tanh-sinh directly in r, singular at r_min.
// q = kappa^2 - (1-r^2)^2/(4r^2) = (r - a)(r + 1/a)(1 + 2 kappa r - r^2) / (4 r^2), with r - a
// taken from the endpoint distance so the square root is not formed by cancellation.
double half_height_oracle(double kappa) {
    const double a = std::sqrt(1 + kappa * kappa) - kappa;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double r, double rc) {
        const double ra = r < 0.5 * (a + 1.0) ? -rc : r - a;
        const double q = ra * (r + 1 / a) * (1 + 2 * kappa * r - r * r) / (4 * r * r);
        return 1.0 / (r * std::sqrt(q));
    };
    return ts.integrate(f, a, 1.0);
}

TEST(HalfHeight, MatchesDirectQuadratureAndIsDecreasing) {
    double prev = pi / 2;
    for (double kappa : {0.5, 1.0, 2.0}) {
        const double h = half_height_from_kappa(kappa);
        EXPECT_NEAR(h, half_height_oracle(kappa), 1e-8);
        EXPECT_LT(h, prev);
        EXPECT_GT(h, 0.0);
        prev = h;
    }
    EXPECT_LT(half_height_from_kappa(1e-6), pi / 2);
}

TEST(HalfHeight, RoundTripAndBracketExtremes) {
    for (double h : {0.3, 0.8, 1.4, 1e-3, pi / 2 - 1e-3}) {
        const double k = kappa_from_half_height(h);
        EXPECT_NEAR(half_height_from_kappa(k), h, 1e-8) << h;
    }
    EXPECT_THROW(kappa_from_half_height(0.0), DomainError);
    EXPECT_THROW(kappa_from_half_height(pi / 2), DomainError);
}

TEST(Profile, FirstIntegralResidualIsSecondOrder) {
    for (double kappa : {0.3, 1.0, 3.0}) {
        const double r1 = first_integral_residual(profile(kappa, 512));
        const double r2 = first_integral_residual(profile(kappa, 1024));
        EXPECT_GE(r1 / r2, 3.5) << kappa;
    }
}

TEST(Profile, NeckSymmetryAndEnds) {
    const auto p = profile(1.0, 257);
    EXPECT_NEAR(p.r[128], neck_radius(1.0), 1e-8);
    double asym = 0.0;
    for (std::size_t i = 0; i < p.r.size(); ++i) asym = std::max(asym, std::abs(p.r[i] - p.r[p.r.size() - 1 - i]));
    EXPECT_LT(asym, 1e-12);
    EXPECT_EQ(p.r.front(), 1.0);
    EXPECT_EQ(p.r.back(), 1.0);
    EXPECT_THROW(profile(1.0, 8), DomainError);
}

TEST(NormalTrace, OneOverKappa) {
    EXPECT_DOUBLE_EQ(graph_normal_trace(2.0), 0.5);
    // finite-difference slope of the graph t(r) at r = 1
    for (double kappa : {0.5, 1.0, 2.0}) {
        const CatenoidEnd e(kappa);
        const double s = 1e-3;
        const double slope = (3 * e.height(1.0) - 4 * e.height(1 - s) + e.height(1 - 2 * s)) / (2 * s);
        EXPECT_NEAR(slope, 1.0 / kappa, 1e-4);
    }
}

TEST(NormalTrace, FluxConsistency) {
    for (double kappa : {0.5, 2.0}) {
        EXPECT_NEAR(2 * pi * graph_normal_trace(kappa), flux_vertical(catenoid_exact_trace(kappa, End::top, 64)),
                    1e-12);
    }
}
