#pragma once

// Horizontal asymptotic boundary curves t = gamma(theta) and pairs of them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "h2r/errors.hpp"
#include "h2r/fourier.hpp"

namespace h2r {

/// gamma(theta) contribution a cos(k theta) + b sin(k theta).
struct FourierTerm {
    int k = 0;
    double a = 0.0;
    double b = 0.0;
    friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

class BoundaryCurve {
public:
    BoundaryCurve() = default;
    explicit BoundaryCurve(std::vector<FourierTerm> terms) : terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (t.k < 0) throw DomainError("Fourier index must be non-negative");
    }

    static BoundaryCurve constant(double c) { return BoundaryCurve({{0, c, 0.0}}); }

    /// Trigonometric interpolant of samples on the uniform grid theta_j = 2 pi j / n.
    static BoundaryCurve from_samples(const std::vector<double>& samples) {
        const int n = static_cast<int>(samples.size());
        if (n < 2) throw DomainError("need at least two curve samples");
        const auto c = dft(samples);
        std::vector<FourierTerm> terms;
        terms.push_back({0, c[0].real() / n, 0.0});
        for (int k = 1; 2 * k <= n; ++k) {
            if (2 * k == n) {
                terms.push_back({k, c[k].real() / n, 0.0});
            } else {
                terms.push_back({k, 2.0 * c[k].real() / n, -2.0 * c[k].imag() / n});
            }
        }
        return BoundaryCurve(std::move(terms));
    }

    double operator()(double theta) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.a * std::cos(t.k * theta) + t.b * std::sin(t.k * theta);
        return s;
    }

    double derivative(double theta) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.k * (-t.a * std::sin(t.k * theta) + t.b * std::cos(t.k * theta));
        return s;
    }

    std::vector<double> samples(int n) const {
        std::vector<double> out(n);
        for (int j = 0; j < n; ++j) out[j] = (*this)(theta_at(j, n));
        return out;
    }

    /// Coefficient magnitude per frequency (merged if a frequency is listed twice).
    std::vector<double> amplitudes() const {
        int kmax = 0;
        for (const auto& t : terms_) kmax = std::max(kmax, t.k);
        std::vector<double> a(kmax + 1, 0.0), b(kmax + 1, 0.0), out(kmax + 1);
        for (const auto& t : terms_) {
            a[t.k] += t.a;
            b[t.k] += t.b;
        }
        for (int k = 0; k <= kmax; ++k) out[k] = std::hypot(a[k], b[k]);
        return out;
    }

    int max_frequency() const {
        int kmax = 0;
        for (const auto& t : terms_) kmax = std::max(kmax, t.k);
        return kmax;
    }

    /// theta -> gamma(theta - zeta)
    BoundaryCurve rotated(double zeta) const {
        std::vector<FourierTerm> out;
        for (const auto& t : terms_) {
            const double c = std::cos(t.k * zeta), s = std::sin(t.k * zeta);
            out.push_back({t.k, t.a * c - t.b * s, t.a * s + t.b * c});
        }
        return BoundaryCurve(std::move(out));
    }

    BoundaryCurve plus(const BoundaryCurve& other) const {
        auto t = terms_;
        t.insert(t.end(), other.terms_.begin(), other.terms_.end());
        return BoundaryCurve(std::move(t));
    }

    const std::vector<FourierTerm>& terms() const noexcept { return terms_; }

private:
    std::vector<FourierTerm> terms_;
};

struct CurvePair {
    BoundaryCurve top;
    BoundaryCurve bottom;

    std::vector<double> gap_samples(int n) const {
        std::vector<double> g(n);
        for (int j = 0; j < n; ++j) {
            const double th = theta_at(j, n);
            g[j] = top(th) - bottom(th);
        }
        return g;
    }

    CurvePair rotated(double zeta) const { return {top.rotated(zeta), bottom.rotated(zeta)}; }
};

/// Adds a vertical translation and a tilt Re(eta e^{i theta}) to the top curve.
inline CurvePair apply_tilt(const CurvePair& pair, double a, std::complex<double> eta) {
    // Re(eta e^{i theta}) = Re(eta) cos(theta) - Im(eta) sin(theta)
    BoundaryCurve tilt({{0, a, 0.0}, {1, eta.real(), -eta.imag()}});
    return {pair.top.plus(tilt), pair.bottom};
}

}  // namespace h2r
