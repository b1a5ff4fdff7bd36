#pragma once

// Jacobi operator of the catenoid C_h split into Fourier modes,
//     L_n = P(t) (d^2/dt^2 - kappa^2 n^2 + (r^-2 + r^2) / 2),  P = (1 - r^2)^2 / (4 kappa^2 r^2),
// discretized on the profile's uniform t-grid with Dirichlet conditions at t = +-h.
// The positive prefactor P is kept separately: it does not change the kernel, and
// without it the matrix is symmetric tridiagonal.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "h2r/catenoid.hpp"
#include "h2r/errors.hpp"

namespace h2r {

struct JacobiMode {
    int n = 0;
    double kappa = 1.0;
    std::vector<double> t;          // full grid, endpoints included
    std::vector<double> potential;  // (r^-2 + r^2)/2 - kappa^2 n^2 at every node
    std::vector<double> prefactor;  // P(t) at every node (zero at the ends)
    double dt = 0.0;

    int interior_size() const { return static_cast<int>(t.size()) - 2; }

    Eigen::VectorXd diagonal(bool with_prefactor = false) const {
        const int m = interior_size();
        Eigen::VectorXd d(m);
        for (int i = 0; i < m; ++i) {
            d[i] = -2.0 / (dt * dt) + potential[i + 1];
            if (with_prefactor) d[i] *= prefactor[i + 1];
        }
        return d;
    }

    // symmetric off-diagonal; with the prefactor this is the similarity transform
    // P^{1/2} A P^{1/2} of P A
    Eigen::VectorXd off_diagonal(bool with_prefactor = false) const {
        const int m = interior_size();
        Eigen::VectorXd e(std::max(m - 1, 0));
        for (int i = 0; i + 1 < m; ++i) {
            e[i] = 1.0 / (dt * dt);
            if (with_prefactor) e[i] *= std::sqrt(prefactor[i + 1] * prefactor[i + 2]);
        }
        return e;
    }

    /// Undivided operator applied to full-grid samples; entries at the two ends are zero.
    std::vector<double> apply(const std::vector<double>& v) const {
        std::vector<double> out(v.size(), 0.0);
        for (std::size_t i = 1; i + 1 < v.size(); ++i)
            out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (dt * dt) + potential[i] * v[i];
        return out;
    }
};

inline JacobiMode assemble_mode_operator(const CatenoidProfile& prof, int n) {
    if (n < 0) throw DomainError("Fourier index must be non-negative");
    JacobiMode m;
    m.n = n;
    m.kappa = prof.kappa;
    m.t = prof.t;
    m.dt = prof.dt();
    const double k2 = prof.kappa * prof.kappa;
    for (double r : prof.r) {
        m.potential.push_back(0.5 * (1.0 / (r * r) + r * r) - k2 * n * n);
        const double s = 1.0 - r * r;
        m.prefactor.push_back(s * s / (4.0 * k2 * r * r));
    }
    return m;
}

inline JacobiMode assemble_mode_operator(double kappa, int n, int n_nodes) {
    if (n_nodes < 32) throw DomainError("mode operator needs at least 32 nodes");
    return assemble_mode_operator(profile(kappa, n_nodes), n);
}

/// Ascending Dirichlet eigenvalues of the (optionally prefactor-weighted) mode operator.
inline Eigen::VectorXd mode_eigenvalues(const JacobiMode& m, bool with_prefactor = false) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(m.diagonal(with_prefactor), m.off_diagonal(with_prefactor),
                              Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Number of eigenvalues below x, from the signs of the LDL^T pivots (Sturm count).
inline int sturm_count(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double x) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < d.size(); ++i) {
        const double off = i > 0 ? e[i - 1] * e[i - 1] : 0.0;
        q = (d[i] - x) - (i > 0 ? off / q : 0.0);
        if (q == 0.0) q = -1e-300;
        if (q < 0) ++count;
    }
    return count;
}

inline double smallest_magnitude(const Eigen::VectorXd& ev) {
    double best = std::abs(ev[0]);
    for (int i = 1; i < ev.size(); ++i) best = std::min(best, std::abs(ev[i]));
    return best;
}

enum class ModeTrend { converges_to_zero, stable_nonzero };

struct ModeReport {
    int n = 0;
    std::vector<int> grid_sizes;
    std::vector<double> smallest;  // smallest |eigenvalue| per refinement level
    ModeTrend trend = ModeTrend::stable_nonzero;
};

struct SpectrumReport {
    double kappa = 1.0;
    int kernel_dimension = 0;
    bool with_prefactor = false;
    double tolerance = 0.0;
    std::vector<ModeReport> modes;
    // a few lowest-magnitude eigenvalues of each mode on the finest grid
    std::vector<std::vector<double>> finest_eigenvalues;
};

struct KernelOptions {
    int base_nodes = 129;  // refined as 2(N-1)+1 so that dt halves exactly
    int refinement_levels = 3;
    double tol = 1e-3;
    bool with_prefactor = false;
};

/// Classify every mode n <= n_max by the refinement trend of its smallest |eigenvalue|.
/// A second-order discretization of a zero eigenvalue shrinks by ~4 per level.
inline SpectrumReport kernel_spectrum(double kappa, int n_max, const KernelOptions& opt = {}) {
    if (n_max < 3) throw DomainError("n_max must be at least 3");
    if (opt.refinement_levels < 3) throw DomainError("need at least three refinement levels");
    SpectrumReport rep;
    rep.kappa = kappa;
    rep.with_prefactor = opt.with_prefactor;
    rep.tolerance = opt.tol;
    std::vector<CatenoidProfile> profiles;
    int nodes = opt.base_nodes;
    for (int l = 0; l < opt.refinement_levels; ++l) {
        profiles.push_back(profile(kappa, nodes));
        nodes = 2 * (nodes - 1) + 1;
    }
    for (int n = 0; n <= n_max; ++n) {
        ModeReport mr;
        mr.n = n;
        Eigen::VectorXd finest;
        for (const auto& p : profiles) {
            auto mode = assemble_mode_operator(p, n);
            finest = mode_eigenvalues(mode, opt.with_prefactor);
            mr.grid_sizes.push_back(static_cast<int>(p.t.size()));
            mr.smallest.push_back(smallest_magnitude(finest));
        }
        const auto& s = mr.smallest;
        const std::size_t L = s.size();
        bool zero = true, stable = true;
        for (std::size_t l = 1; l < L; ++l) {
            const double ratio = s[l - 1] / s[l];
            if (!(ratio > 3.0 && ratio < 5.5)) zero = false;
            // anything short of halving per level is not second-order decay to zero
            if (!(ratio > 0.5 && ratio < 2.0)) stable = false;
        }
        zero = zero && s[L - 1] < opt.tol;
        stable = stable && s[L - 1] > opt.tol;
        if (zero == stable) {
            throw IndeterminateError("ambiguous refinement trend for mode " + std::to_string(n), s);
        }
        mr.trend = zero ? ModeTrend::converges_to_zero : ModeTrend::stable_nonzero;
        if (zero) rep.kernel_dimension += n == 0 ? 1 : 2;
        std::vector<double> ev(finest.data(), finest.data() + finest.size());
        std::sort(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        ev.resize(std::min<std::size_t>(ev.size(), 4));
        rep.finest_eigenvalues.push_back(ev);
        rep.modes.push_back(std::move(mr));
    }
    return rep;
}

inline int kernel_dimension(double kappa, int n_max, double tol = 1e-3, int refinement_levels = 3) {
    KernelOptions o;
    o.tol = tol;
    o.refinement_levels = refinement_levels;
    return kernel_spectrum(kappa, n_max, o).kernel_dimension;
}

struct KnownFieldResiduals {
    // residuals are max interior |L v| divided by max |v|, so thin necks with large
    // phi are comparable to wide ones
    double res_phi = 0.0;          // v = phi = 1/r - r in mode 1
    double res_translation = 0.0;  // v = r'/r in mode 0
    double translation_at_ends = 0.0;  // |r'/r| at t = +-h (not a decaying field)
};

inline std::vector<double> dilation_field(const CatenoidProfile& p) {
    std::vector<double> v;
    for (double r : p.r) v.push_back(1.0 / r - r);
    return v;
}

inline std::vector<double> translation_field(const CatenoidProfile& p) {
    std::vector<double> v;
    for (std::size_t i = 0; i < p.r.size(); ++i) v.push_back(p.rt[i] / p.r[i]);
    return v;
}

inline double max_interior_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double relative_residual(const CatenoidProfile& p, int n, const std::vector<double>& v) {
    return max_interior_abs(assemble_mode_operator(p, n).apply(v)) / max_abs(v);
}

inline KnownFieldResiduals known_field_residuals(const CatenoidProfile& p) {
    KnownFieldResiduals out;
    out.res_phi = relative_residual(p, 1, dilation_field(p));
    const auto tr = translation_field(p);
    out.res_translation = relative_residual(p, 0, tr);
    out.translation_at_ends = std::min(std::abs(tr.front()), std::abs(tr.back()));
    return out;
}

}  // namespace h2r
