#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace h2r {

// Second-order forward-mode jet over N independent variables: carries the value,
// the gradient and the (symmetric) Hessian. Used to differentiate per-cell
// energies exactly, which gives the solvers their analytic Jacobians.
template <std::size_t N>
struct Jet {
    double v = 0.0;
    std::array<double, N> g{};
    std::array<double, N * N> h{};

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT: implicit lift of constants

    static Jet variable(std::size_t i, double value) {
        Jet j(value);
        j.g[i] = 1.0;
        return j;
    }

    double hess(std::size_t i, std::size_t k) const { return h[i * N + k]; }

    Jet& operator+=(const Jet& o) {
        v += o.v;
        for (std::size_t i = 0; i < N; ++i) g[i] += o.g[i];
        for (std::size_t i = 0; i < N * N; ++i) h[i] += o.h[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        for (std::size_t i = 0; i < N; ++i) g[i] -= o.g[i];
        for (std::size_t i = 0; i < N * N; ++i) h[i] -= o.h[i];
        return *this;
    }
    Jet& operator*=(double s) {
        v *= s;
        for (auto& x : g) x *= s;
        for (auto& x : h) x *= s;
        return *this;
    }
};

template <std::size_t N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a) { return a *= -1.0; }
template <std::size_t N>
Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <std::size_t N>
Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <std::size_t N>
Jet<N> operator+(Jet<N> a, double s) { a.v += s; return a; }
template <std::size_t N>
Jet<N> operator+(double s, Jet<N> a) { a.v += s; return a; }
template <std::size_t N>
Jet<N> operator-(Jet<N> a, double s) { a.v -= s; return a; }
template <std::size_t N>
Jet<N> operator-(double s, Jet<N> a) { a *= -1.0; a.v += s; return a; }

template <std::size_t N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> out(a.v * b.v);
    for (std::size_t i = 0; i < N; ++i) out.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            out.h[i * N + k] = a.h[i * N + k] * b.v + a.v * b.h[i * N + k] +
                               a.g[i] * b.g[k] + a.g[k] * b.g[i];
    return out;
}

// f(a) given f, f', f'' at a.v
template <std::size_t N>
Jet<N> chain(const Jet<N>& a, double f, double df, double d2f) {
    Jet<N> out(f);
    for (std::size_t i = 0; i < N; ++i) out.g[i] = df * a.g[i];
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            out.h[i * N + k] = df * a.h[i * N + k] + d2f * a.g[i] * a.g[k];
    return out;
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
    const double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

template <std::size_t N>
Jet<N> inverse(const Jet<N>& a) {
    const double r = 1.0 / a.v;
    return chain(a, r, -r * r, 2.0 * r * r * r);
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) { return a * inverse(b); }
template <std::size_t N>
Jet<N> operator/(Jet<N> a, double s) { return a *= 1.0 / s; }
template <std::size_t N>
Jet<N> operator/(double s, const Jet<N>& b) { return inverse(b) * s; }

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Jet<N>& x) { return x.v; }

}  // namespace h2r
