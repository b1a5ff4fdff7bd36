#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "h2r/tallrect.hpp"

using namespace h2r;
constexpr double pi = std::numbers::pi;

TEST(TallRect, ParamsValidate) {
    EXPECT_THROW(TallRectParams(1.0), DomainError);
    EXPECT_THROW(TallRectParams(0.5), DomainError);
    EXPECT_THROW(TallRectParams(2.0, 0), DomainError);
    EXPECT_NEAR(TallRectParams(2.0).theta0(), pi / 6, 1e-15);
}

TEST(TallRect, EllipticSpecialValues) {
    EXPECT_NEAR(elliptic_E(0.7, 0.0).value, 0.7, 1e-14);
    EXPECT_NEAR(elliptic_F(0.7, 0.0).value, 0.7, 1e-14);
    EXPECT_NEAR(elliptic_E(pi / 2, 1.0).value, 1.0, 1e-13);
    EXPECT_THROW(elliptic_F(pi / 2, 1.0), DomainError);
    EXPECT_NEAR(elliptic_E(-0.4, 0.5).value, -elliptic_E(0.4, 0.5).value, 1e-15);
    for (double d : {1.1, 2.0, 5.0}) {
        const double t0 = std::asin(1 / d);
        EXPECT_GT(elliptic_F(t0, d * d).value - elliptic_E(t0, d * d).value, 0.0);
    }
}

TEST(TallRect, EllipticAgreesWithLibraryBelowOne) {
    for (double m : {0.1, 0.5, 0.9})
        for (double phi : {0.3, 1.0, 1.5}) {
            EXPECT_NEAR(elliptic_F(phi, m).value, boost::math::ellint_1(std::sqrt(m), phi), 1e-12);
            EXPECT_NEAR(elliptic_E(phi, m).value, boost::math::ellint_2(std::sqrt(m), phi), 1e-12);
        }
}

TEST(TallRect, EllipticAboveOneAgreesWithReciprocalModulus) {
    // F(phi|m) = F(beta|1/m) / sqrt(m), sin beta = sqrt(m) sin phi
    for (double m : {1.21, 4.0, 25.0}) {
        const double t0 = std::asin(1 / std::sqrt(m));
        for (double frac : {0.2, 0.7, 0.99, 1.0}) {
            const double phi = frac * t0;
            const double beta = std::asin(std::min(1.0, std::sqrt(m) * std::sin(phi)));
            const double ref = boost::math::ellint_1(1 / std::sqrt(m), beta) / std::sqrt(m);
            EXPECT_NEAR(elliptic_F(phi, m).value, ref, 1e-11) << m << ' ' << phi;
        }
    }
}

TEST(TallRect, EllipticEAboveOneAgreesWithDirectQuadrature) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double m : {1.21, 4.0, 25.0}) {
        const double phi = 0.9 * std::asin(1 / std::sqrt(m));
        const double ref =
            ts.integrate([&](double s) { return std::sqrt(std::max(0.0, 1 - m * std::sin(s) * std::sin(s))); }, 0.0, phi);
        EXPECT_NEAR(elliptic_E(phi, m).value, ref, 1e-12);
    }
}

TEST(TallRect, EllipticDomain) {
    EXPECT_THROW(elliptic_F(0.6, 4.0), DomainError);  // sqrt(m) sin(phi) > 1
    EXPECT_THROW(elliptic_E(2.0, 1.5), DomainError);
}

TEST(TallRect, LambdaProfile) {
    for (double d : {1.1, 2.0, 5.0}) {
        const TallRectParams p(d);
        EXPECT_NEAR(lambda_profile(p, p.theta0()), 0.0, 1e-14);
        EXPECT_NEAR(lambda_profile(p, 0.0), boost::math::ellint_1(1 / d), 1e-12);
        EXPECT_GT(tall_rectangle_height(p), pi);
        const auto lw = lambda_profile_with_error(p, 0.3 * p.theta0());
        EXPECT_LT(lw.error, 1e-10);
        for (double frac : {0.1, 0.5, 0.9}) {
            const double th = frac * p.theta0(), s = 1e-5;
            const double fd = (lambda_profile(p, th + s) - lambda_profile(p, th - s)) / (2 * s);
            EXPECT_NEAR(lambda_derivative(p, th), fd, 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
    EXPECT_NEAR(tall_rectangle_height(TallRectParams(1e6)), pi, 1e-6);
}

TEST(TallRect, Sigma1Area) {
    const TallRectParams p(2.0);
    const double t0 = p.theta0();
    EXPECT_NEAR(area_sigma1(0.5, t0 * (1 - 1e-12), p), 0.0, 1e-5);
    EXPECT_NEAR(area_sigma1(0.25, 0.2, p), 2 * area_sigma1(0.5, 0.2, p), 1e-12);
    EXPECT_THROW(area_sigma1(1.0, 0.2, p), DomainError);
    EXPECT_THROW(area_sigma1(0.5, t0, p), DomainError);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ur(0.05, 0.9), ut(0.05, 0.95);
    for (double d : {1.1, 2.0, 5.0}) {
        const TallRectParams q(d);
        for (int k = 0; k < 5; ++k) {
            const double r = ur(rng), th = ut(rng) * q.theta0();
            const double a = area_sigma1(r, th, q), ref = sigma1_surface_quadrature(r, th, q);
            EXPECT_NEAR(a, ref, 1e-6 * std::max(1.0, ref)) << d << ' ' << r << ' ' << th;
        }
    }
}

TEST(TallRect, D1AndB1) {
    EXPECT_NEAR(area_D1(std::exp(-1.0), pi / 4), 4.0, 1e-14);
    EXPECT_NEAR(area_D1(0.3, 0.4), d1_area_quadrature(0.3, 0.4), 1e-6);
    EXPECT_THROW(area_D1(0.5, pi / 2), DomainError);
    const TallRectParams p(2.0);
    EXPECT_NEAR(area_B1_bound(pi / 2, p), 0.0, 1e-14);
    double prev = INFINITY;
    for (double th = 0.05; th < pi / 2; th += 0.1) {
        const double b = area_B1_bound(th, p);
        EXPECT_LT(b, prev);
        prev = b;
    }
    const double L = -2 * std::log(std::tan(0.05));
    EXPECT_NEAR(area_B1_bound(0.1, p), 2 * boost::math::ellint_1(0.5) * L, 1e-11);
}

TEST(TallRect, RatioTendsToOneWithTheLimitSlope) {
    for (double d : {1.1, 2.0, 5.0}) {
        const int n = smallest_positive_slope_n(d);
        const TallRectParams p(d, n);
        const double eps = 1e-6;
        EXPECT_NEAR(ratio_f(eps, p), 1.0, 1e-3);
        const double slope = (ratio_f(2 * eps, p) - ratio_f(eps, p)) / eps;
        EXPECT_NEAR(slope, limit_slope(p), 0.05 * std::abs(limit_slope(p)) + 1e-3) << d;
    }
}

TEST(TallRect, SmallestPositiveSlopeExponent) {
    EXPECT_EQ(smallest_positive_slope_n(1.1), 2);
    EXPECT_EQ(smallest_positive_slope_n(2.0), 4);
    EXPECT_EQ(smallest_positive_slope_n(5.0), 10);
    EXPECT_LT(limit_slope(TallRectParams(2.0, 3)), 0.0);
    EXPECT_THROW(smallest_positive_slope_n(5.0, 3), NoWitness);
}

TEST(TallRect, Witnesses) {
    for (double d : {1.1, 2.0, 5.0}) {
        const auto w = verify_not_minimizing(d);
        EXPECT_GT(w.margin(), 0.0);
        EXPECT_GT(w.A1, w.A2 + w.A3);
        EXPECT_GT(w.f_value - 1.0, 100 * w.error_bound);
        EXPECT_GE(w.n, smallest_positive_slope_n(d) - 1);
        const auto re = ratio_f_with_error(w.theta_star, TallRectParams(d, w.n));
        EXPECT_DOUBLE_EQ(re.f, w.f_value);
    }
    WitnessOptions o;
    o.n_max = 1;
    EXPECT_THROW(verify_not_minimizing(5.0, o), NoWitness);
    o.parallel = false;
    o.n_max = 20;
    EXPECT_EQ(verify_not_minimizing(2.0, o).n, verify_not_minimizing(2.0).n);
}
