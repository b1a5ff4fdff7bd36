#pragma once

// Discrete area in H^2 x R (disk model, g = lambda^2 |dz|^2 + dt^2). Triangles are
// flat in product coordinates with the conformal factor frozen at the centroid.
// Quads average both diagonal splittings so that no checkerboard mode has zero
// energy.

#include <array>
#include <cmath>

#include "h2r/errors.hpp"
#include "h2r/jet.hpp"

namespace h2r {

template <class T>
struct SpacePoint {
    T x, y, t;
};

// 1/lambda^2 = (1 - |c|^2)^2 / 4 at the centroid
template <class T>
T centroid_F(const SpacePoint<T>& p, const SpacePoint<T>& q, const SpacePoint<T>& s) {
    const T cx = (p.x + q.x + s.x) * (1.0 / 3.0);
    const T cy = (p.y + q.y + s.y) * (1.0 / 3.0);
    const T one_minus = 1.0 - (cx * cx + cy * cy);
    if (!(value_of(one_minus) > 0.0)) throw DomainError("surface left the disk");
    return one_minus * one_minus * 0.25;
}

// Area of a triangle whose three vertices may all move.
//   EG - F^2 = lambda^4 (a x b)^2 + lambda^2 |alpha b - beta a|^2
template <class T>
T triangle_area(const SpacePoint<T>& p, const SpacePoint<T>& q, const SpacePoint<T>& s) {
    const T ax = q.x - p.x, ay = q.y - p.y, alpha = q.t - p.t;
    const T bx = s.x - p.x, by = s.y - p.y, beta = s.t - p.t;
    const T cross = ax * by - ay * bx;
    const T wx = alpha * bx - beta * ax, wy = alpha * by - beta * ay;
    const T F = centroid_F(p, q, s);
    // lambda^2 = 1/F; area = (1/2) sqrt(cross^2 / F^2 + |w|^2 / F)
    return 0.5 * sqrt((cross * cross + F * (wx * wx + wy * wy)) / (F * F));
}

// Graph over a fixed horizontal triangle: area minus the flat area, written so
// that lambda^2 cancels analytically (bounded up to r = 1).
template <class T>
T graph_triangle_excess(const std::array<double, 2>& p, const std::array<double, 2>& q,
                        const std::array<double, 2>& s, const T& up, const T& uq, const T& us) {
    const double ax = q[0] - p[0], ay = q[1] - p[1];
    const double bx = s[0] - p[0], by = s[1] - p[1];
    const double cross = std::abs(ax * by - ay * bx);
    const double cx = (p[0] + q[0] + s[0]) / 3.0, cy = (p[1] + q[1] + s[1]) / 3.0;
    const double F = 0.25 * std::pow(1.0 - (cx * cx + cy * cy), 2);
    const T alpha = uq - up, beta = us - up;
    const T wx = alpha * bx - beta * ax, wy = alpha * by - beta * ay;
    const T w2 = wx * wx + wy * wy;  // = cross^2 |grad u|^2
    // lambda^2 A (sqrt(1 + F g^2) - 1) = A g^2 / (1 + sqrt(1 + F g^2)), g^2 = w2 / cross^2
    return 0.5 * w2 / (cross * (1.0 + sqrt(1.0 + F * w2 / (cross * cross))));
}

// Quad (0,1,2,3) counter-clockwise: mean of the two diagonal splittings.
template <class T>
T quad_area(const std::array<SpacePoint<T>, 4>& v) {
    return 0.5 * (triangle_area(v[0], v[1], v[2]) + triangle_area(v[0], v[2], v[3]) +
                  triangle_area(v[0], v[1], v[3]) + triangle_area(v[1], v[2], v[3]));
}

template <class T>
T graph_quad_excess(const std::array<std::array<double, 2>, 4>& xy, const std::array<T, 4>& u) {
    return 0.5 * (graph_triangle_excess(xy[0], xy[1], xy[2], u[0], u[1], u[2]) +
                  graph_triangle_excess(xy[0], xy[2], xy[3], u[0], u[2], u[3]) +
                  graph_triangle_excess(xy[0], xy[1], xy[3], u[0], u[1], u[3]) +
                  graph_triangle_excess(xy[1], xy[2], xy[3], u[1], u[2], u[3]));
}

}  // namespace h2r
