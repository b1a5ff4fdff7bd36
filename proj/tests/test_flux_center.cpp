#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "h2r/flux.hpp"

using namespace h2r;
constexpr double pi = std::numbers::pi;

TEST(Flux, CatenoidExactTraces) {
    for (double kappa : {0.5, 1.0, 4.0}) {
        const auto top = catenoid_exact_trace(kappa, End::top, 64);
        const auto bot = catenoid_exact_trace(kappa, End::bottom, 64);
        EXPECT_NEAR(flux_vertical(top), 2 * pi / kappa, 1e-10);
        EXPECT_NEAR(flux_vertical(bot), -2 * pi / kappa, 1e-10);
        EXPECT_LT(std::abs(flux_rotational(top)), 1e-12);
        for (double a : a_grid()) EXPECT_LT(std::abs(flux_dilation(top, a)), 1e-12);
        EXPECT_LT(conservation_residuals(top, bot).max(), 1e-12);
    }
}

TEST(Flux, DilatedCatenoidKeepsItsVerticalFlux) {
    const auto tr = catenoid_end_trace(1.0, DiskPoint(0.3, 0.2), End::top, 128);
    EXPECT_NEAR(flux_vertical(tr), 2 * pi, 1e-8);
}

TEST(Flux, FiniteRadiusInvariance) {
    const CatenoidEnd cat(1.0);
    for (double rho : {0.5, 0.6, 0.7, 0.8, 0.9}) {
        const auto s = catenoid_end_samples(cat, DiskPoint(0.0, 0.0), End::top, rho, 64);
        EXPECT_NEAR(finite_radius_flux_vertical(rho, s.ur, s.ut), 2 * pi, 1e-6) << rho;
    }
    EXPECT_THROW(finite_radius_flux_vertical(1.0, {1.0}, {0.0}), DomainError);
}

TEST(Flux, CorruptedTraceIsDetected) {
    auto top = catenoid_exact_trace(1.0, End::top, 64);
    const auto bot = catenoid_exact_trace(1.0, End::bottom, 64);
    for (auto& x : top.ur) x *= 1.01;
    EXPECT_NEAR(conservation_residuals(top, bot).vertical, 0.01 * 2 * pi, 1e-12);
}

TEST(Flux, DilationFluxAngleAddition) {
    const int n = 64;
    std::vector<double> u(n), ur(n);
    for (int j = 0; j < n; ++j) {
        const double t = theta_at(j, n);
        u[j] = 1.0 + 0.1 * std::cos(t) + 0.05 * std::sin(2 * t);
        ur[j] = 1.0 + 0.2 * std::sin(t) - 0.1 * std::cos(3 * t);
    }
    const auto tr = EndTrace::from_values(End::top, u, ur);
    for (double a : {0.3, 1.7, 4.0}) {
        // sin(theta - a) = sin(theta) cos(a) - cos(theta) sin(a)
        const double expect = std::cos(a) * flux_dilation(tr, 0.0) - std::sin(a) * flux_dilation_cos(tr, 0.0);
        EXPECT_NEAR(flux_dilation(tr, a), expect, 1e-13);
    }
    // rotating the trace rotates the dilation flux family
    const auto rot = tr.rotated(0.5);
    EXPECT_NEAR(flux_dilation(rot, 1.2), flux_dilation(tr, 0.7), 1e-12);
    EXPECT_NEAR(flux_rotational(rot), flux_rotational(tr), 1e-12);
}

TEST(Center, DilatedCatenoidsAreCenteredAtTheirAxis) {
    const int n = 128;
    const std::vector<double> flat(n, 0.0);
    for (auto z0 : {std::complex<double>(0.0), std::complex<double>(0.3), std::polar(0.5, pi / 3)}) {
        const auto c = center(catenoid_end_trace(1.0, DiskPoint(z0), End::bottom, n), flat);
        EXPECT_LT(std::abs(c.center.z() - z0), 1e-4);
    }
}

TEST(Center, RotationEquivariance) {
    const int n = 64;
    const std::vector<double> flat(n, 0.0);
    const auto tr = catenoid_end_trace(2.0, DiskPoint(0.2, 0.1), End::bottom, n);
    const auto c0 = center(tr, flat);
    for (double zeta : {0.4, 2.0}) {
        const auto c1 = center(tr.rotated(zeta), flat);
        EXPECT_LT(std::abs(c1.center.z() - std::polar(1.0, zeta) * c0.center.z()), 1e-10);
    }
}

TEST(Center, ExtendedMapComponents) {
    const int n = 64;
    const auto c = center(catenoid_exact_trace(1.0, End::bottom, n), std::vector<double>(n, 0.0));
    EXPECT_NEAR(c.f0, -2 * pi, 1e-12);
    EXPECT_NEAR(c.G0, -2 * pi + 1 / (2 * pi), 1e-12);
    EXPECT_NEAR(c.G1, 0.0, 1e-14);
}

TEST(Center, MembershipAndEndChecks) {
    const int n = 32;
    const auto bot = catenoid_exact_trace(1.0, End::bottom, n);
    EXPECT_THROW(center(bot, std::vector<double>(n, -2.0)), DomainError);  // u_r - v_r > 0
    EXPECT_THROW(center(catenoid_exact_trace(1.0, End::top, n), std::vector<double>(n, 0.0)), DomainError);
}
