#pragma once

// Triangle meshes of the computed surfaces and their OBJ / PLY writers.

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "h2r/annulus_solver.hpp"
#include "h2r/catenoid.hpp"
#include "h2r/errors.hpp"
#include "h2r/tallrect.hpp"

namespace h2r {

struct Mesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;  // zero-based

    bool valid_indices() const {
        const int n = static_cast<int>(vertices.size());
        for (const auto& f : faces)
            for (int v : f)
                if (v < 0 || v >= n) return false;
        return true;
    }
};

enum class MeshFormat { obj, ply };

inline MeshFormat mesh_format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ext == "ply") return MeshFormat::ply;
    return MeshFormat::obj;
}

inline void write_obj(const Mesh& m, std::ostream& os) {
    os << std::setprecision(12);
    for (const auto& v : m.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

inline void write_ply(const Mesh& m, std::ostream& os) {
    os << "ply\nformat ascii 1.0\nelement vertex " << m.vertices.size()
       << "\nproperty double x\nproperty double y\nproperty double z\nelement face " << m.faces.size()
       << "\nproperty list uchar int vertex_indices\nend_header\n";
    os << std::setprecision(12);
    for (const auto& v : m.vertices) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : m.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline void export_mesh(const Mesh& m, const std::string& path, MeshFormat fmt) {
    if (!m.valid_indices()) throw DomainError("mesh has out-of-range face indices");
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    if (fmt == MeshFormat::ply)
        write_ply(m, os);
    else
        write_obj(m, os);
}

inline void export_mesh(const Mesh& m, const std::string& path) { export_mesh(m, path, mesh_format_from_path(path)); }

/// rows x cols vertex grid from f(i, j); columns wrap around when periodic.
inline Mesh grid_mesh(int rows, int cols, bool periodic, const std::function<std::array<double, 3>(int, int)>& f) {
    Mesh m;
    m.vertices.reserve(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.vertices.push_back(f(i, j));
    const int jmax = periodic ? cols : cols - 1;
    for (int i = 0; i + 1 < rows; ++i) {
        for (int j = 0; j < jmax; ++j) {
            const int jn = (j + 1) % cols;
            const int a = i * cols + j, b = (i + 1) * cols + j, c = (i + 1) * cols + jn, d = i * cols + jn;
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    return m;
}

/// Catenoid of revolution in disk coordinates (x, y, t).
inline Mesh catenoid_mesh(const CatenoidProfile& p, int ntheta) {
    if (ntheta < 3) throw DomainError("need at least 3 angular samples");
    const int rows = static_cast<int>(p.t.size());
    return grid_mesh(rows, ntheta, true, [&](int i, int j) {
        const double th = theta_at(j, ntheta);
        return std::array<double, 3>{p.r[i] * std::cos(th), p.r[i] * std::sin(th), p.t[i]};
    });
}

/// Perturbed annulus X0 + u n on the chart grid.
inline Mesh annulus_mesh(const AnnulusChart& c, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != c.num_nodes()) throw DomainError("u does not match the chart");
    return grid_mesh(c.nt, c.ntheta, true, [&](int i, int j) {
        const double th = c.theta(j), uu = u[c.node(i, j)];
        const double rad = c.base.r[i] + uu * c.n_rad[i];
        return std::array<double, 3>{rad * std::cos(th), rad * std::sin(th), c.base.t[i] + uu * c.n_t[i]};
    });
}

/// Upper and mirrored lower half of a tall rectangle in half-plane coordinates,
/// r log-spaced in [r_lo, r_hi], theta uniform in [0, theta0]. The halves share the
/// seam row theta = theta0 (height 0).
inline Mesh tallrect_mesh(const TallRectParams& prm, double r_lo, double r_hi, int n_r = 48, int n_theta = 48) {
    if (!(r_lo > 0.0 && r_hi > r_lo)) throw DomainError("need 0 < r_lo < r_hi");
    if (n_r < 2 || n_theta < 2) throw DomainError("need at least 2 samples per direction");
    const double t0 = prm.theta0();
    std::vector<double> th(n_theta), lam(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        th[i] = t0 * i / (n_theta - 1);
        lam[i] = i + 1 == n_theta ? 0.0 : lambda_profile(prm, th[i]);
    }
    // rows 0 .. n_theta-1: upper half from theta = 0 to the seam; then the lower half back out
    const int rows = 2 * n_theta - 1;
    return grid_mesh(rows, n_r, false, [&](int i, int j) {
        const int k = i < n_theta ? i : rows - 1 - i;
        const double sign = i < n_theta ? 1.0 : -1.0;
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(j) / (n_r - 1));
        return std::array<double, 3>{r * std::cos(th[k]), r * std::sin(th[k]), sign * lam[k]};
    });
}

}  // namespace h2r
