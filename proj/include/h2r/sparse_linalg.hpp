#pragma once

// Small spectral helpers for symmetric sparse matrices: the eigenvalues closest
// to zero (inverse subspace iteration with a sparse LU) and the spectral radius
// (power iteration). Enough for near-kernel detection and condition estimates.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "h2r/errors.hpp"

namespace h2r {

struct EigenPairs {
    std::vector<double> values;  // sorted by magnitude
    Eigen::MatrixXd vectors;     // orthonormal columns, same order
};

inline EigenPairs smallest_magnitude_eigenpairs(const Eigen::SparseMatrix<double>& A, int count, int iterations = 60,
                                                unsigned seed = 7) {
    const int n = static_cast<int>(A.rows());
    const int p = std::min(n, count + 4);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        // exactly singular to working precision: report a zero
        throw SingularLinearization("matrix is singular to working precision", {0.0});
    }
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < p; ++k) X(i, k) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    std::vector<double> prev;
    EigenPairs out;
    for (int it = 0; it < iterations; ++it) {
        Eigen::MatrixXd Y(n, p);
        for (int k = 0; k < p; ++k) Y.col(k) = lu.solve(X.col(k));
        qr.compute(Y);
        X = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
        const Eigen::MatrixXd T = X.transpose() * (A * X);
        es.compute(0.5 * (T + T.transpose()));
        std::vector<int> order(p);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return std::abs(es.eigenvalues()[a]) < std::abs(es.eigenvalues()[b]); });
        Eigen::MatrixXd Z(n, p);
        std::vector<double> vals(p);
        for (int k = 0; k < p; ++k) {
            Z.col(k) = X * es.eigenvectors().col(order[k]);
            vals[k] = es.eigenvalues()[order[k]];
        }
        X = Z;
        bool done = !prev.empty();
        for (int k = 0; k < count && done; ++k)
            if (std::abs(vals[k] - prev[k]) > 1e-10 * std::max(1.0, std::abs(vals[k]))) done = false;
        prev = vals;
        if (done) break;
    }
    out.values.assign(prev.begin(), prev.begin() + count);
    out.vectors = X.leftCols(count);
    return out;
}

/// Largest |eigenvalue| of a symmetric matrix by Lanczos with full reorthogonalization;
/// extreme Ritz values converge long before the Krylov space fills up.
inline double spectral_radius(const Eigen::SparseMatrix<double>& A, int steps = 200, unsigned seed = 11) {
    const int n = static_cast<int>(A.rows());
    steps = std::min(steps, n);
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd Q(n, steps);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q[i] = nd(rng);
    q.normalize();
    std::vector<double> alpha, beta;
    int m = 0;
    for (; m < steps; ++m) {
        Q.col(m) = q;
        Eigen::VectorXd w = A * q;
        alpha.push_back(q.dot(w));
        for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(m + 1) * (Q.leftCols(m + 1).transpose() * w);
        const double b = w.norm();
        if (b < 1e-12 * std::abs(alpha.back()) || m + 1 == steps) {
            ++m;
            break;
        }
        beta.push_back(b);
        q = w / b;
    }
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[m - 1]));
}

}  // namespace h2r
