#pragma once

// JSON serialization of module reports and the envelope the CLI emits. Keys are
// sorted (nlohmann's default object), so equal inputs give byte-identical output
// apart from the "timing" block.

#include <json.hpp>

#include <string>

#include "h2r/annulus_solver.hpp"
#include "h2r/catenoid.hpp"
#include "h2r/curves.hpp"
#include "h2r/flux.hpp"
#include "h2r/graph_solver.hpp"
#include "h2r/jacobi.hpp"
#include "h2r/obstruction.hpp"
#include "h2r/tallrect.hpp"

namespace h2r {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

struct ResultEnvelope {
    std::string command;
    json config = json::object();
    json results = json::object();
    json timing = json::object();
    std::string version = kVersion;

    friend bool operator==(const ResultEnvelope&, const ResultEnvelope&) = default;
};

inline void to_json(json& j, const ResultEnvelope& e) {
    j = json{{"command", e.command}, {"config", e.config}, {"results", e.results}, {"timing", e.timing},
             {"version", e.version}};
}

inline void from_json(const json& j, ResultEnvelope& e) {
    j.at("command").get_to(e.command);
    e.config = j.at("config");
    e.results = j.at("results");
    e.timing = j.at("timing");
    j.at("version").get_to(e.version);
}

// ---- curves ----

inline void to_json(json& j, const FourierTerm& t) { j = json{{"k", t.k}, {"a", t.a}, {"b", t.b}}; }

inline void from_json(const json& j, FourierTerm& t) {
    t.k = j.at("k").get<int>();
    t.a = j.value("a", 0.0);
    t.b = j.value("b", 0.0);
}

/// {"terms": [{k, a, b}, ...]} or {"samples": [...]} (uniform grid, size = grid size).
inline BoundaryCurve curve_from_json(const json& j) {
    if (j.is_number()) return BoundaryCurve::constant(j.get<double>());
    if (j.contains("terms")) return BoundaryCurve(j.at("terms").get<std::vector<FourierTerm>>());
    if (j.contains("samples")) {
        auto s = j.at("samples").get<std::vector<double>>();
        if (j.contains("n") && j.at("n").get<std::size_t>() != s.size())
            throw DomainError("sample count does not match the declared grid size");
        return BoundaryCurve::from_samples(s);
    }
    throw DomainError("curve must be a number, {\"terms\": [...]} or {\"samples\": [...]}");
}

inline json curve_to_json(const BoundaryCurve& c) { return json{{"terms", c.terms()}}; }

inline CurvePair pair_from_json(const json& j) {
    if (!j.contains("top") || !j.contains("bottom")) throw DomainError("pair needs \"top\" and \"bottom\"");
    return {curve_from_json(j.at("top")), curve_from_json(j.at("bottom"))};
}

// ---- module reports ----

inline json to_json_report(const ObstructionReport& r) {
    json j;
    j["verdict"] = verdict_name(r.verdict);
    j["note"] = r.note;
    j["gap"] = {{"min", r.gap.min_gap},
                {"max", r.gap.max_gap},
                {"theta_min", r.gap.theta_min},
                {"theta_max", r.gap.theta_max},
                {"band", gap_band_name(r.gap.band)}};
    if (r.gap.catenoid)
        j["gap"]["catenoid_witness"] = {
            {"h", r.gap.catenoid->h}, {"offset", r.gap.catenoid->offset}, {"kappa", r.gap.catenoid->kappa}};
    j["tilt"] = {{"flagged", r.tilt.flagged}, {"shift", r.tilt.shift}, {"constant_pair", r.tilt.constant_pair}};
    j["winding"] = {{"admissible", r.winding.admissible}, {"margin", r.winding.margin}};
    if (r.winding.admissible) j["winding"]["class"] = r.winding.winding;
    j["symmetry"] = {{"m", r.symmetry.m}, {"m_max", r.symmetry.m_max},
                     {"fillable_by_symmetry", r.symmetry.fillable_by_symmetry}};
    if (!r.symmetry.annotation.empty()) j["symmetry"]["annotation"] = r.symmetry.annotation;
    return j;
}

inline json to_json_report(const Witness& w, double tol) {
    return json{{"d", w.d},           {"n", w.n},   {"theta_star", w.theta_star}, {"f_value", w.f_value},
                {"error_bound", w.error_bound}, {"margin", w.margin()},      {"A1", w.A1},
                {"A2", w.A2},         {"A3", w.A3}, {"quadrature_tolerance", tol}};
}

inline json to_json_report(const FluxReport& r) {
    return json{{"end", end_name(r.end)}, {"vertical", r.vertical}, {"rotational", r.rotational},
                {"a", r.a},               {"dilation", r.dilation}};
}

inline json to_json_report(const ConservationResiduals& c) {
    return json{{"vertical", c.vertical}, {"rotational", c.rotational}, {"dilation", c.dilation},
                {"orientation_suspect", c.orientation_suspect}};
}

inline json to_json_report(const CenterReport& c) {
    return json{{"f0", c.f0}, {"f1", c.f1}, {"f2", c.f2}, {"G0", c.G0}, {"G1", c.G1}, {"G2", c.G2},
                {"center", {c.center.x(), c.center.y()}}};
}

inline json to_json_report(const SpectrumReport& r) {
    json modes = json::array();
    for (std::size_t i = 0; i < r.modes.size(); ++i) {
        const auto& m = r.modes[i];
        modes.push_back({{"n", m.n},
                         {"grid_sizes", m.grid_sizes},
                         {"smallest", m.smallest},
                         {"trend", m.trend == ModeTrend::converges_to_zero ? "converges_to_zero" : "stable_nonzero"},
                         {"finest_eigenvalues", r.finest_eigenvalues[i]}});
    }
    return json{{"kappa", r.kappa}, {"kernel_dimension", r.kernel_dimension}, {"with_prefactor", r.with_prefactor},
                {"tolerance", r.tolerance}, {"modes", modes}};
}

inline json to_json_report(const GraphSolution& s, double tol) {
    return json{{"nr", s.grid.nr()},
                {"ntheta", s.grid.ntheta()},
                {"iterations", s.iterations},
                {"residual_norm", s.residual_norm},
                {"residual_history", s.residual_history},
                {"tolerance", tol},
                {"normal_trace", s.normal_trace},
                {"vertical_flux", periodic_integral(s.normal_trace)}};
}

inline json to_json_report(const AnnulusSolution& s, double tol) {
    return json{{"iterations", s.iterations},
                {"residual_norm", s.residual_norm},
                {"residual_history", s.residual_history},
                {"tolerance", tol},
                {"symmetry", s.symmetry},
                {"near_kernel", s.near_kernel},
                {"top", to_json_report(flux_report(s.top))},
                {"bottom", to_json_report(flux_report(s.bottom))},
                {"conservation", to_json_report(conservation_residuals(s.top, s.bottom))}};
}

}  // namespace h2r
