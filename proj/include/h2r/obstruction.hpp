#pragma once

// Computable fillability gates for a pair of boundary curves. Nothing here claims
// fillability except for the constant (catenoid) and rotationally symmetric cases.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "h2r/catenoid.hpp"
#include "h2r/curves.hpp"
#include "h2r/errors.hpp"

namespace h2r {

enum class Verdict { NotFillableGap, NotFillableTilt, GatePassed, CrossingPair };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::NotFillableGap: return "NotFillableGap";
        case Verdict::NotFillableTilt: return "NotFillableTilt";
        case Verdict::GatePassed: return "GatePassed";
        case Verdict::CrossingPair: return "CrossingPair";
    }
    return "?";
}

// where the gap sits relative to pi
enum class GapBand { below_pi, inconclusive, above_pi, crossing };

inline const char* gap_band_name(GapBand b) {
    switch (b) {
        case GapBand::below_pi: return "below_pi";
        case GapBand::inconclusive: return "inconclusive";
        case GapBand::above_pi: return "above_pi";
        case GapBand::crossing: return "crossing";
    }
    return "?";
}

struct CatenoidWitness {
    double h = 0.0;       // half-height
    double offset = 0.0;  // vertical translation
    double kappa = 0.0;
};

struct GapReport {
    double min_gap = 0.0, max_gap = 0.0;
    double theta_min = 0.0, theta_max = 0.0;  // where they occur
    GapBand band = GapBand::inconclusive;
    std::optional<CatenoidWitness> catenoid;
};

struct TiltReport {
    bool flagged = false;
    double shift = 0.0;  // phase zeta such that theta -> gamma(theta + zeta) is in normal position
    bool constant_pair = false;
};

struct WindingReport {
    bool admissible = false;
    int winding = 0;
    double margin = 0.0;  // min distance of the derivative curve from the origin
};

struct SymmetryReport {
    int m = 1;
    int m_max = 1;
    bool fillable_by_symmetry = false;
    std::string annotation;
};

struct ObstructionReport {
    Verdict verdict = Verdict::GatePassed;
    GapReport gap;
    TiltReport tilt;
    WindingReport winding;
    SymmetryReport symmetry;
    std::string note;
};

struct ObstructionOptions {
    int samples = 0;            // 0: chosen from the Fourier content
    double monotone_tol = 1e-10;
    double symmetry_tol = 1e-12;
    double constant_tol = 1e-12;
    int m_max = 12;
};

namespace detail {

inline bool is_constant(const BoundaryCurve& g, double tol) {
    const auto a = g.amplitudes();
    for (std::size_t k = 1; k < a.size(); ++k)
        if (a[k] > tol) return false;
    return true;
}

inline double mean_value(const BoundaryCurve& g) {
    double c = 0.0;
    for (const auto& t : g.terms())
        if (t.k == 0) c += t.a;
    return c;
}

inline int default_samples(const CurvePair& p, int requested) {
    if (requested > 0) return requested + (requested % 2);
    const int k = std::max(p.top.max_frequency(), p.bottom.max_frequency());
    int n = 512;
    while (n < 32 * k) n *= 2;
    return n;
}

}  // namespace detail

inline GapReport gap_check(const CurvePair& pair, const ObstructionOptions& o = {}) {
    const int n = detail::default_samples(pair, o.samples);
    const auto g = pair.gap_samples(n);
    GapReport r;
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    r.min_gap = *lo;
    r.max_gap = *hi;
    r.theta_min = theta_at(static_cast<int>(lo - g.begin()), n);
    r.theta_max = theta_at(static_cast<int>(hi - g.begin()), n);
    const double pi = std::numbers::pi;
    if (r.min_gap <= 0.0)
        r.band = GapBand::crossing;
    else if (r.min_gap > pi)
        r.band = GapBand::above_pi;
    else if (r.max_gap < pi)
        r.band = GapBand::below_pi;
    else
        r.band = GapBand::inconclusive;
    if (r.band == GapBand::below_pi && detail::is_constant(pair.top, o.constant_tol) &&
        detail::is_constant(pair.bottom, o.constant_tol)) {
        const double top = detail::mean_value(pair.top), bot = detail::mean_value(pair.bottom);
        CatenoidWitness w;
        w.h = 0.5 * (top - bot);
        w.offset = 0.5 * (top + bot);
        w.kappa = kappa_from_half_height(w.h);
        r.catenoid = w;
    }
    return r;
}

/// Looks for a phase zeta with theta -> gamma+(theta + zeta) non-increasing on [0, pi] and
/// non-decreasing on [pi, 2 pi], and gamma- the other way round.
inline TiltReport tilt_monotonicity_check(const CurvePair& pair, const ObstructionOptions& o = {}) {
    TiltReport r;
    r.constant_pair = detail::is_constant(pair.top, o.constant_tol) && detail::is_constant(pair.bottom, o.constant_tol);
    if (r.constant_pair) return r;
    const int n = detail::default_samples(pair, o.samples);  // even, so pi is a grid point
    const auto top = pair.top.samples(n), bot = pair.bottom.samples(n);
    const double tol = o.monotone_tol;
    for (int s = 0; s < n; ++s) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            const int a = (s + j) % n, b = (s + j + 1) % n;
            const double dt = top[b] - top[a], db = bot[b] - bot[a];
            if (j < n / 2)
                ok = dt <= tol && db >= -tol;
            else
                ok = dt >= -tol && db <= tol;
        }
        if (ok) {
            r.flagged = true;
            r.shift = theta_at(s, n);
            return r;
        }
    }
    return r;
}

/// Winding number of theta -> (gamma+'(theta), gamma-'(theta)) about the origin.
inline WindingReport admissibility(const CurvePair& pair, const ObstructionOptions& o = {}) {
    int n = detail::default_samples(pair, o.samples);
    for (int attempt = 0; attempt < 6; ++attempt, n *= 2) {
        std::vector<double> ang(n);
        WindingReport r;
        r.margin = INFINITY;
        for (int j = 0; j < n; ++j) {
            const double th = theta_at(j, n);
            const double x = pair.top.derivative(th), y = pair.bottom.derivative(th);
            r.margin = std::min(r.margin, std::hypot(x, y));
            ang[j] = std::atan2(y, x);
        }
        // scale-aware zero test on the derivative curve
        double scale = 0.0;
        for (const auto& t : pair.top.terms()) scale = std::max(scale, t.k * std::hypot(t.a, t.b));
        for (const auto& t : pair.bottom.terms()) scale = std::max(scale, t.k * std::hypot(t.a, t.b));
        if (!(r.margin > 1e-10 * std::max(scale, 1e-300))) {
            r.admissible = false;
            return r;
        }
        double total = 0.0, worst = 0.0;
        for (int j = 0; j < n; ++j) {
            double da = ang[(j + 1) % n] - ang[j];
            da = std::remainder(da, 2.0 * std::numbers::pi);
            worst = std::max(worst, std::abs(da));
            total += da;
        }
        if (worst < std::numbers::pi / 4) {  // increments resolved
            r.admissible = true;
            r.winding = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
            return r;
        }
    }
    throw NumericsError("derivative curve not resolved; winding number undetermined");
}

/// Largest m <= m_max such that every frequency present in both curves is a multiple of m.
inline SymmetryReport symmetry_detect(const CurvePair& pair, const ObstructionOptions& o = {}) {
    SymmetryReport r;
    r.m_max = o.m_max;
    const auto at = pair.top.amplitudes(), ab = pair.bottom.amplitudes();
    for (int m = o.m_max; m >= 1; --m) {
        bool ok = true;
        for (std::size_t k = 1; k < at.size() && ok; ++k)
            if (k % m != 0 && at[k] > o.symmetry_tol) ok = false;
        for (std::size_t k = 1; k < ab.size() && ok; ++k)
            if (k % m != 0 && ab[k] > o.symmetry_tol) ok = false;
        if (ok) {
            r.m = m;
            break;
        }
    }
    return r;
}

inline ObstructionReport obstruction_report(const CurvePair& pair, const ObstructionOptions& o = {}) {
    ObstructionReport rep;
    rep.gap = gap_check(pair, o);
    rep.tilt = tilt_monotonicity_check(pair, o);
    rep.winding = admissibility(pair, o);
    rep.symmetry = symmetry_detect(pair, o);
    if (rep.symmetry.m >= 2 && rep.gap.band == GapBand::below_pi) {
        rep.symmetry.fillable_by_symmetry = true;
        rep.symmetry.annotation = "R_m-invariant with gap below pi: minimally fillable by an R_m-invariant annulus";
    }
    if (rep.gap.band == GapBand::crossing) {
        rep.verdict = Verdict::CrossingPair;
        rep.note = "curves cross at theta = " + std::to_string(rep.gap.theta_min);
    } else if (rep.gap.band == GapBand::above_pi) {
        rep.verdict = Verdict::NotFillableGap;
        rep.note = "gap exceeds pi everywhere (min at theta = " + std::to_string(rep.gap.theta_min) +
                   "): no properly embedded minimal annulus";
    } else if (rep.tilt.flagged) {
        rep.verdict = Verdict::NotFillableTilt;
        rep.note = "curves tilt away from each other after phase shift " + std::to_string(rep.tilt.shift) +
                   ": no embedded minimal annulus; the argument also covers Alexandrov-embedded annuli, "
                   "which this check does not distinguish";
    } else {
        rep.verdict = Verdict::GatePassed;
        if (rep.gap.catenoid)
            rep.note = "constant pair: filled by the catenoid of half-height " + std::to_string(rep.gap.catenoid->h);
        else if (rep.symmetry.fillable_by_symmetry)
            rep.note = rep.symmetry.annotation;
        else if (rep.gap.band == GapBand::inconclusive)
            rep.note = "gap crosses pi: inconclusive, no nonexistence claim";
        else
            rep.note = "no obstruction found; fillability not decided";
    }
    return rep;
}

}  // namespace h2r
