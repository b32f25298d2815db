#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/lamination.hpp"
#include "anosov/torus_map.hpp"

namespace anosov {

inline constexpr double kPi = std::numbers::pi;

// Arc of directions on RP^1 = R / pi Z.
struct Arc {
    double start = 0;  // in [0, pi)
    double len = 0;    // in [0, pi]
};

inline double mod_pi(double a) {
    double r = std::fmod(a, kPi);
    return r < 0 ? r + kPi : r;
}

inline bool arcs_meet(const Arc& a, const Arc& b) {
    return mod_pi(b.start - a.start) <= a.len || mod_pi(a.start - b.start) <= b.len;
}

inline double arc_gap(const Arc& a, const Arc& b) {
    if (arcs_meet(a, b)) return 0.0;
    return std::min(mod_pi(b.start - (a.start + a.len)), mod_pi(a.start - (b.start + b.len)));
}

inline double direction_angle(const Vec2& v) { return mod_pi(std::atan2(v.y, v.x)); }

inline Arc push_arc(const Arc& a, const Mat2& m) {
    double s0 = direction_angle(m.apply({std::cos(a.start), std::sin(a.start)}));
    if (a.len == 0) return {s0, 0};
    if (a.len >= kPi) return {s0, kPi};
    double e = a.start + a.len;
    double s1 = direction_angle(m.apply({std::cos(e), std::sin(e)}));
    return {s0, mod_pi(s1 - s0)};
}

// Normal-form geometry of a lamination in a given chart: leaf i is the
// vertical line x = pos[i]; in band i with width w and t = (x - pos[i]) / w
// the non-compact leaves are graphs y = c + k (sL ln t - sR ln(1 - t)).
class LamGeometry {
public:
    LamGeometry(TorusLamination lam, const Chart& chart)
        : lam_(std::move(lam)), pos_(chart.resolve(lam_.n_compact())), kappa_(chart.steepness) {
        if (lam_.n_compact() == 0) throw Unsupported("lamination without compact leaves");
    }

    const TorusLamination& lamination() const { return lam_; }
    std::size_t n() const { return pos_.size(); }
    double position(std::size_t i) const { return pos_[i]; }
    double width(std::size_t i) const {
        return i + 1 < n() ? pos_[i + 1] - pos_[i] : pos_[0] + 1.0 - pos_[i];
    }
    double kappa() const { return kappa_; }

    struct Loc {
        std::size_t band;
        double left;  // lifted abscissa of the band's left leaf, left <= x
        double t;
    };

    Loc locate(double x) const {
        double base = pos_[0];
        double xr = base + frac(x - base);
        auto it = std::upper_bound(pos_.begin(), pos_.end(), xr);
        std::size_t i = std::size_t(it - pos_.begin()) - 1;
        double left = x - (xr - pos_[i]);
        return {i, left, (xr - pos_[i]) / width(i)};
    }

    double slope(std::size_t band, double t) const {
        BandProfile p = lam_.profile(band);
        double sl = as_int(left_half_sign(p)), sr = as_int(right_half_sign(p));
        if (t <= 0) return sl * INFINITY;
        if (t >= 1) return sr * INFINITY;
        return kappa_ / width(band) * (sl / t + sr / (1 - t));
    }

    // y offset of the band graph; logs written to stay accurate near the ends
    double graph(std::size_t band, double log_t, double log_1mt) const {
        BandProfile p = lam_.profile(band);
        double sl = as_int(left_half_sign(p)), sr = as_int(right_half_sign(p));
        return kappa_ * (sl * log_t - sr * log_1mt);
    }

    // Directions taken by leaves over the abscissa range [x0, x1] (lifted).
    void angle_arcs(double x0, double x1, std::vector<Arc>& out) const {
        out.clear();
        if (x1 - x0 >= 1.0) {
            for (std::size_t i = 0; i < n(); ++i)
                if (lam_.bands[i].filled) {
                    out.push_back({0, kPi});
                    return;
                }
        }
        // compact leaves inside the range
        for (std::size_t i = 0; i < n(); ++i) {
            double p = pos_[i] + std::ceil(x0 - pos_[i]);
            if (p <= x1) out.push_back({kPi / 2, 0});
        }
        double x = x0;
        int guard = 0;
        while (x < x1 && guard++ < 4 * int(n()) + 8) {
            Loc loc = locate(x);
            double w = width(loc.band);
            double mid = loc.left + w / 2, right = loc.left + w;
            double e = x < mid ? std::min(mid, x1) : std::min(right, x1);
            if (lam_.bands[loc.band].filled) {
                double t0 = (x - loc.left) / w, t1 = (e - loc.left) / w;
                double a0 = std::atan(slope(loc.band, t0));
                double a1 = std::atan(slope(loc.band, t1));
                double lo = std::min(a0, a1), hi = std::max(a0, a1);
                out.push_back({mod_pi(lo), hi - lo});
            }
            if (e <= x) break;
            x = e;
        }
    }

private:
    TorusLamination lam_;
    std::vector<double> pos_;
    double kappa_;
};

// Piecewise-linear curve in lifted coordinates. Closed curves repeat after
// `period`; the segment from the last point goes to pts[0] + period.
struct PLCurve {
    std::vector<Vec2> pts;
    bool closed = false;
    Vec2 period{0, 0};
    int tag = 0;           // which lamination
    bool compact = false;  // compact leaf or band sample
    std::size_t index = 0; // leaf index or band index
    int sample = -1;

    std::size_t segment_count() const { return closed ? pts.size() : pts.size() - 1; }
    Vec2 seg_start(std::size_t k) const { return pts[k]; }
    Vec2 seg_end(std::size_t k) const { return k + 1 < pts.size() ? pts[k + 1] : pts[0] + period; }
    Vec2 at(double param) const {
        std::size_t k = std::min(std::size_t(param), segment_count() - 1);
        double f = param - double(k);
        return seg_start(k) + (seg_end(k) - seg_start(k)) * f;
    }
    Vec2 tangent(double param) const {
        std::size_t k = std::min(std::size_t(param), segment_count() - 1);
        return seg_end(k) - seg_start(k);
    }
};

struct Face {
    std::size_t corners = 0;
    bool truncated = false;
    Vec2 displacement{0, 0};
    Vec2 witness{0, 0};
};

struct PLArrangement {
    std::vector<PLCurve> curves;
    std::vector<Face> faces;
};

struct DrawOptions {
    int samples_per_band = 2;
    double window = 2.0;      // turns kept near each compact leaf
    int leaf_points = 64;     // vertices on a compact circle
    double step = 0.08;       // logit step along band samples
};

// Deterministic, deliberately irregular offsets for band samples.
inline double sample_offset(std::size_t band, int j, int samples) {
    return frac((double(j) + 0.5) / samples + 0.1234567 + 0.0370370 * double(band));
}

inline std::vector<PLCurve> draw(const LamGeometry& g, int tag, const DrawOptions& opt = {}) {
    std::vector<PLCurve> out;
    const auto& lam = g.lamination();
    for (std::size_t i = 0; i < g.n(); ++i) {
        PLCurve c;
        c.closed = true;
        c.compact = true;
        c.period = {0, 1};
        c.tag = tag;
        c.index = i;
        double y0 = 0.0731 * double(i + 1);
        for (int k = 0; k < opt.leaf_points; ++k)
            c.pts.push_back({g.position(i), y0 + double(k) / opt.leaf_points});
        out.push_back(std::move(c));
    }
    // t_lo solves k |ln t| = window
    double log_tlo = -opt.window / g.kappa();
    double v_lo = log_tlo - std::log1p(-std::exp(log_tlo));
    for (std::size_t i = 0; i < g.n(); ++i) {
        if (!lam.bands[i].filled) continue;
        double a = g.position(i), w = g.width(i);
        for (int j = 0; j < opt.samples_per_band; ++j) {
            PLCurve c;
            c.tag = tag;
            c.index = i;
            c.sample = j;
            double off = sample_offset(i, j, opt.samples_per_band);
            int steps = int(std::ceil(-2 * v_lo / opt.step));
            for (int s = 0; s <= steps; ++s) {
                double v = v_lo + (-2 * v_lo) * double(s) / steps;
                double log_t = -std::log1p(std::exp(-v));
                double log_1mt = -std::log1p(std::exp(v));
                double t = std::exp(log_t);
                c.pts.push_back({a + w * t, off + g.graph(i, log_t, log_1mt)});
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

inline void push_curves(std::vector<PLCurve>& curves, const TorusMap& m) {
    for (auto& c : curves) {
        for (auto& p : c.pts) p = m.apply(p);
        c.period = m.matrix.apply(c.period);
    }
}

inline PLArrangement normal_form(const TorusLamination& f, int samples_per_band, const Chart& chart = {},
                                 double window = 2.0) {
    if (f.n_compact() == 0) throw Unsupported("normal form of a leafless lamination");
    DrawOptions opt;
    opt.samples_per_band = samples_per_band;
    opt.window = window;
    PLArrangement a;
    a.curves = draw(LamGeometry(f, chart), 0, opt);
    return a;
}

}  // namespace anosov
