#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "h2r/jacobi.hpp"

using namespace h2r;

TEST(Jacobi, KnownFieldsAreSecondOrderKernels) {
    for (double kappa : {0.3, 1.0, 3.0}) {
        const auto a = known_field_residuals(profile(kappa, 512));
        const auto b = known_field_residuals(profile(kappa, 1024));
        EXPECT_LT(a.res_phi, 1e-3);
        EXPECT_LT(a.res_translation, 1e-3);
        EXPECT_LT(b.res_phi, 2.6e-4);
        EXPECT_LT(b.res_translation, 2.6e-4);
        EXPECT_GT(a.translation_at_ends, 0.1);  // r'/r does not decay
    }
}

TEST(Jacobi, RandomFunctionIsNotInTheKernel) {
    const auto p = profile(1.0, 512);
    const double res = known_field_residuals(p).res_phi;
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    const double c1 = nd(rng), c2 = nd(rng), c3 = nd(rng);
    std::vector<double> v(p.t.size());
    const auto phi = dilation_field(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = (p.t[i] + p.h) / (2 * p.h);
        // same boundary values as phi (zero), smooth interior
        v[i] = c1 * std::sin(std::numbers::pi * x) + c2 * std::sin(2 * std::numbers::pi * x) +
               c3 * std::sin(3 * std::numbers::pi * x) + phi[i];
    }
    EXPECT_GT(relative_residual(p, 1, v), 100 * res);
}

TEST(Jacobi, HighModeDiagonalDominatedByFrequencyTerm) {
    const auto m = assemble_mode_operator(1.0, 5, 64);
    for (std::size_t i = 0; i < m.potential.size(); ++i) EXPECT_LT(m.potential[i], -25.0 + 3.5);
}

TEST(Jacobi, KernelDimensionIsTwo) {
    for (double kappa : {0.3, 0.75, 1.0, 3.0}) EXPECT_EQ(kernel_dimension(kappa, 4), 2) << kappa;
}

TEST(Jacobi, ModeTwoIsStableAndPositiveSideOfZero) {
    const auto rep = kernel_spectrum(1.0, 4);
    EXPECT_EQ(rep.modes[1].trend, ModeTrend::converges_to_zero);
    EXPECT_EQ(rep.modes[2].trend, ModeTrend::stable_nonzero);
    EXPECT_GT(rep.modes[2].smallest.back(), 1.0);
}

TEST(Jacobi, WeightedSpectrumHasTheSameKernel) {
    KernelOptions o;
    o.with_prefactor = true;
    EXPECT_EQ(kernel_spectrum(1.0, 4, o).kernel_dimension, 2);
}

TEST(Jacobi, SturmCountAgreesWithEigenvalues) {
    const auto m = assemble_mode_operator(1.0, 0, 64);
    const auto ev = mode_eigenvalues(m);
    for (double x : {-100.0, -10.0, 0.0, 0.5}) {
        int below = 0;
        for (int i = 0; i < ev.size(); ++i) below += ev[i] < x;
        EXPECT_EQ(sturm_count(m.diagonal(), m.off_diagonal(), x), below);
    }
}

TEST(Jacobi, RejectsBadArguments) {
    EXPECT_THROW(assemble_mode_operator(1.0, -1, 64), DomainError);
    EXPECT_THROW(kernel_dimension(1.0, 2), DomainError);
}
