#pragma once

// Poincare disk model of H^2 with metric 4|dz|^2 / (1 - |z|^2)^2, and the
// isometries used throughout: rotations about the origin and the horizontal
// dilations T_{z0}(z) = (z + z0) / (conj(z0) z + 1), which carry 0 to z0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "h2r/errors.hpp"

namespace h2r {

using Complex = std::complex<double>;

/// Point of the open unit disk, stored in Cartesian coordinates.
class DiskPoint {
public:
    DiskPoint() = default;
    DiskPoint(double x, double y) : x_(x), y_(y) {
        if (!(x * x + y * y < 1.0)) throw DomainError("point is not inside the open unit disk");
    }
    explicit DiskPoint(Complex z) : DiskPoint(z.real(), z.imag()) {}

    static DiskPoint polar(double radius, double angle) {
        return DiskPoint(radius * std::cos(angle), radius * std::sin(angle));
    }

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double norm2() const noexcept { return x_ * x_ + y_ * y_; }
    double radius() const noexcept { return std::sqrt(norm2()); }
    double angle() const noexcept { return std::atan2(y_, x_); }
    Complex z() const noexcept { return {x_, y_}; }

    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

private:
    double x_ = 0.0;
    double y_ = 0.0;
};

struct MetricSample {
    double lambda2 = 4.0;  // conformal factor 4 / (1 - |z|^2)^2
    double F = 0.25;       // (1 - |z|^2)^2 / 4 = 1 / lambda2
};

inline MetricSample conformal_factor_r2(double r2) {
    if (!(r2 < 1.0)) throw DomainError("conformal factor requested outside the open disk");
    const double s = 1.0 - r2;
    return {4.0 / (s * s), 0.25 * s * s};
}

inline MetricSample conformal_factor(const DiskPoint& p) { return conformal_factor_r2(p.norm2()); }

/// (1 - r^2)^2 / 4, defined (and vanishing) on the closed disk.
inline double metric_F(double r) {
    const double s = 1.0 - r * r;
    return 0.25 * s * s;
}

inline Complex mobius_dilation(Complex z0, Complex z) { return (z + z0) / (std::conj(z0) * z + 1.0); }

inline DiskPoint apply_dilation(const DiskPoint& z0, const DiskPoint& p) {
    const Complex w = mobius_dilation(z0.z(), p.z());
    // |w| < 1 holds analytically; round-off can only push points already at ~1-1e-16.
    const double n = std::abs(w);
    if (n >= 1.0) return DiskPoint(std::polar(std::nextafter(1.0, 0.0), std::arg(w)));
    return DiskPoint(w);
}

inline DiskPoint apply_rotation(double zeta, const DiskPoint& p) {
    return DiskPoint(p.z() * std::polar(1.0, zeta));
}

inline double hyperbolic_distance(const DiskPoint& p, const DiskPoint& q) {
    const Complex a = p.z(), b = q.z();
    const double num = std::abs(a - b);
    const double den = std::abs(1.0 - std::conj(a) * b);
    const double s = std::clamp(num / den, 0.0, 1.0 - 1e-15);
    return 2.0 * std::atanh(s);
}

struct Rotation {
    double zeta = 0.0;
};
struct Dilation {
    DiskPoint z0;
};

/// Isometry of H^2 as a flattened word of rotations and dilations, applied left to right.
class Isometry {
public:
    using Step = std::variant<Rotation, Dilation>;

    Isometry() = default;
    static Isometry rotation(double zeta) { return Isometry({Rotation{zeta}}); }
    static Isometry dilation(const DiskPoint& z0) { return Isometry({Dilation{z0}}); }

    /// this first, then other
    Isometry then(const Isometry& other) const {
        std::vector<Step> s = steps_;
        s.insert(s.end(), other.steps_.begin(), other.steps_.end());
        return Isometry(std::move(s));
    }

    Isometry inverse() const {
        std::vector<Step> s;
        for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
            if (auto* r = std::get_if<Rotation>(&*it))
                s.push_back(Rotation{-r->zeta});
            else
                s.push_back(Dilation{DiskPoint(-std::get<Dilation>(*it).z0.z())});
        }
        return Isometry(std::move(s));
    }

    DiskPoint operator()(const DiskPoint& p) const {
        DiskPoint q = p;
        for (const auto& step : steps_) {
            if (auto* r = std::get_if<Rotation>(&step))
                q = apply_rotation(r->zeta, q);
            else
                q = apply_dilation(std::get<Dilation>(step).z0, q);
        }
        return q;
    }

    const std::vector<Step>& steps() const noexcept { return steps_; }

private:
    explicit Isometry(std::vector<Step> steps) : steps_(std::move(steps)) {}
    std::vector<Step> steps_;
};

}  // namespace h2r
