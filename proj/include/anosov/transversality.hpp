#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "anosov/lamination.hpp"
#include "anosov/normal_form.hpp"
#include "anosov/torus_map.hpp"

namespace anosov {

struct TransverseOptions {
    bool strong = true;
    int samples_per_band = 2;
    double window = 2.0;
    int grid = 16;          // initial cells per side for the direction check
    int max_depth = 9;      // subdivision limit
    double min_gap = 1e-9;  // radians
};

struct Crossing {
    std::size_t curve[2];
    double param[2];
    Vec2 point;
};

struct Certificate {
    bool ok = false;
    bool strong = false;
    std::string failure;
    std::optional<Vec2> witness;
    double min_angle_gap = 0;
    std::size_t cells = 0;
    std::size_t crossings = 0;
    std::size_t faces = 0;
    std::size_t bounded_faces = 0;
    // crossings between pushed compact leaf i of L1 and compact leaf j of L2
    std::vector<std::vector<std::size_t>> leaf_intersections;
    // crossings of each pushed compact leaf of L1 with any curve of L2
    std::vector<std::size_t> pushed_leaf_crossings;
    // crossings of each compact leaf of L2 with any pushed curve of L1
    std::vector<std::size_t> receiving_leaf_crossings;
};

namespace detail {

struct DirectionCheck {
    const LamGeometry& g1;
    const LamGeometry& g2;
    const TorusMap& m;
    const TransverseOptions& opt;
    Mat2 inv;
    std::vector<Arc> a1, a2, pushed;
    double min_gap = INFINITY;
    std::size_t cells = 0;
    std::optional<Vec2> witness;

    DirectionCheck(const LamGeometry& x, const LamGeometry& y, const TorusMap& map,
                   const TransverseOptions& o)
        : g1(x), g2(y), m(map), opt(o), inv(map.matrix.inverse()) {}

    // true when separated on the cell
    bool cell(double x0, double x1, double y0, double y1, int depth) {
        g2.angle_arcs(x0, x1, a2);
        bool sep = true;
        double gap = INFINITY;
        if (!a2.empty()) {
            double sx = to_double(m.sx), sy = to_double(m.sy);
            double qlo = INFINITY, qhi = -INFINITY;
            for (double px : {x0, x1})
                for (double py : {y0, y1}) {
                    Vec2 q = inv.apply({px - sx, py - sy});
                    qlo = std::min(qlo, q.x);
                    qhi = std::max(qhi, q.x);
                }
            if (qhi - qlo >= 1.0) {
                sep = false;
            } else {
                g1.angle_arcs(qlo, qhi, a1);
                for (const auto& a : a1) {
                    Arc p = push_arc(a, m.matrix);
                    for (const auto& b : a2) gap = std::min(gap, arc_gap(p, b));
                }
                sep = gap > opt.min_gap;
            }
        }
        if (sep) {
            ++cells;
            min_gap = std::min(min_gap, gap);
            return true;
        }
        if (depth >= opt.max_depth) {
            witness = Vec2{(x0 + x1) / 2, (y0 + y1) / 2};
            return false;
        }
        double xm = (x0 + x1) / 2, ym = (y0 + y1) / 2;
        return cell(x0, xm, y0, ym, depth + 1) && cell(xm, x1, y0, ym, depth + 1) &&
               cell(x0, xm, ym, y1, depth + 1) && cell(xm, x1, ym, y1, depth + 1);
    }

    bool run() {
        int n = opt.grid;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!cell(double(i) / n, double(i + 1) / n, double(j) / n, double(j + 1) / n, 0))
                    return false;
        return true;
    }
};

struct Segment {
    std::size_t curve;
    std::size_t index;
    Vec2 a, b;  // translated so that a lies in [0,1)^2
    int tag;
};

inline bool segment_hit(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double& s, double& t,
                        bool& degenerate) {
    Vec2 r = b - a, q = d - c;
    double den = cross(r, q);
    Vec2 ca = c - a;
    double scale = r.norm() * q.norm();
    degenerate = false;
    if (std::fabs(den) <= 1e-12 * scale) {
        if (std::fabs(cross(ca, r)) <= 1e-12 * r.norm() * std::max(1.0, ca.norm())) {
            // collinear: overlap means a non-transverse contact
            double rr = dot(r, r);
            double u0 = dot(ca, r) / rr, u1 = dot(d - a, r) / rr;
            if (std::max(u0, u1) >= 0 && std::min(u0, u1) <= 1) degenerate = true;
        }
        return false;
    }
    s = cross(ca, q) / den;
    t = cross(ca, r) / den;
    return s >= 0 && s < 1 && t >= 0 && t < 1;
}

struct Arrangement {
    std::vector<PLCurve> curves;
    std::vector<Crossing> crossings;
    std::string failure;
    std::optional<Vec2> witness;

    bool find_crossings() {
        const int G = 64;
        std::vector<Segment> segs;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            const auto& cv = curves[c];
            for (std::size_t k = 0; k < cv.segment_count(); ++k) {
                Vec2 a = cv.seg_start(k), b = cv.seg_end(k);
                Vec2 sh{std::floor(a.x), std::floor(a.y)};
                segs.push_back({c, k, a - sh, b - sh, cv.tag});
            }
        }
        std::vector<std::vector<std::size_t>> cell0(G * G), cell1(G * G);
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const auto& sg = segs[s];
            int ix0 = int(std::floor(std::min(sg.a.x, sg.b.x) * G)), ix1 = int(std::floor(std::max(sg.a.x, sg.b.x) * G));
            int iy0 = int(std::floor(std::min(sg.a.y, sg.b.y) * G)), iy1 = int(std::floor(std::max(sg.a.y, sg.b.y) * G));
            if (ix1 - ix0 >= G) ix1 = ix0 + G - 1;
            if (iy1 - iy0 >= G) iy1 = iy0 + G - 1;
            for (int ix = ix0; ix <= ix1; ++ix)
                for (int iy = iy0; iy <= iy1; ++iy) {
                    int cx = ((ix % G) + G) % G, cy = ((iy % G) + G) % G;
                    (sg.tag == 0 ? cell0 : cell1)[cx * G + cy].push_back(s);
                }
        }
        struct Key {
            std::size_t s0, s1;
            int dx, dy;
            bool operator==(const Key& o) const { return s0 == o.s0 && s1 == o.s1 && dx == o.dx && dy == o.dy; }
        };
        struct KeyHash {
            std::size_t operator()(const Key& k) const {
                return std::hash<std::size_t>()(k.s0 * 1000003u ^ k.s1) ^ std::size_t(k.dx * 31 + k.dy + 64);
            }
        };
        std::unordered_set<Key, KeyHash> seen;
        for (int cidx = 0; cidx < G * G; ++cidx) {
            for (std::size_t s0 : cell0[cidx])
                for (std::size_t s1 : cell1[cidx]) {
                    const auto& A = segs[s0];
                    const auto& B = segs[s1];
                    for (int dx = -1; dx <= 1; ++dx)
                        for (int dy = -1; dy <= 1; ++dy) {
                            Key key{s0, s1, dx, dy};
                            if (seen.count(key)) continue;
                            Vec2 off{double(dx), double(dy)};
                            double s = 0, t = 0;
                            bool degenerate = false;
                            bool hit = segment_hit(A.a, A.b, B.a + off, B.b + off, s, t, degenerate);
                            if (degenerate) {
                                failure = "non-transverse contact between curves";
                                witness = A.a;
                                return false;
                            }
                            if (!hit) continue;
                            seen.insert(key);
                            Vec2 p = A.a + (A.b - A.a) * s;
                            crossings.push_back({{A.curve, B.curve},
                                                 {double(A.index) + s, double(B.index) + t},
                                                 {frac(p.x), frac(p.y)}});
                        }
                }
        }
        return true;
    }

    // Traces the complement faces by always turning left at crossings.
    bool trace_faces(std::vector<Face>& faces, bool& all_ok) {
        std::size_t nc = curves.size();
        // events[c] = (param, crossing id, which end) sorted
        std::vector<std::vector<std::pair<double, std::size_t>>> events(nc);
        for (std::size_t x = 0; x < crossings.size(); ++x)
            for (int e = 0; e < 2; ++e) events[crossings[x].curve[e]].push_back({crossings[x].param[e], x});
        for (auto& ev : events) std::sort(ev.begin(), ev.end());
        // position of crossing x inside events of its curves
        std::vector<std::array<std::size_t, 2>> slot(crossings.size());
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t k = 0; k < events[c].size(); ++k) {
                auto& cr = crossings[events[c][k].second];
                int e = (cr.curve[0] == c) ? 0 : 1;
                slot[events[c][k].second][e] = k;
            }
        all_ok = true;
        for (std::size_t c = 0; c < nc; ++c)
            if (curves[c].closed && events[c].empty()) {
                all_ok = false;
                failure = "closed leaf without crossings bounds a non-disc face";
                witness = Vec2{frac(curves[c].pts[0].x), frac(curves[c].pts[0].y)};
                return false;
            }
        // half-edge (c, k, dir): leaves event k on c in direction dir;
        // k = -1 / k = m stand for the free ends of an open curve
        std::map<std::tuple<std::size_t, long, int>, bool> used;
        auto lifted_disp = [&](std::size_t c, double p0, double p1, bool wrapped, int dir) {
            const auto& cv = curves[c];
            Vec2 d = cv.at(p1) - cv.at(p0);
            if (wrapped) d = d + cv.period * double(dir);
            return d;
        };
        for (std::size_t c0 = 0; c0 < nc; ++c0) {
            long m0 = long(events[c0].size());
            for (long k0 = (curves[c0].closed ? 0 : -1); k0 < m0 + (curves[c0].closed ? 0 : 1); ++k0)
                for (int d0 : {1, -1}) {
                    if (k0 == -1 && d0 == -1) continue;
                    if (k0 == m0 && d0 == 1) continue;
                    if (m0 == 0) continue;
                    auto start = std::make_tuple(c0, k0, d0);
                    if (used.count(start)) continue;
                    Face f;
                    std::size_t c = c0;
                    long k = k0;
                    int d = d0;
                    bool have_witness = false;
                    for (std::size_t guard = 0; guard < 4 * crossings.size() + 16; ++guard) {
                        auto key = std::make_tuple(c, k, d);
                        if (used.count(key)) break;
                        used[key] = true;
                        long m = long(events[c].size());
                        long nk = k + d;
                        bool wrapped = false;
                        if (nk == m || nk == -1) {
                            if (curves[c].closed) {
                                nk = (nk + m) % m;
                                wrapped = true;
                            } else {
                                f.truncated = true;
                                // walk back along the other side of the free end
                                k = nk;
                                d = -d;
                                continue;
                            }
                        }
                        if (k >= 0 && k < m) {
                            double p0 = events[c][k].first, p1 = events[c][nk].first;
                            f.displacement = f.displacement + lifted_disp(c, p0, p1, wrapped, d);
                        }
                        // turn left at the crossing reached
                        std::size_t x = events[c][nk].second;
                        const auto& cr = crossings[x];
                        int e = cr.curve[0] == c ? 0 : 1;
                        std::size_t other = cr.curve[1 - e];
                        Vec2 u = curves[c].tangent(cr.param[e]) * double(d);
                        Vec2 w = curves[other].tangent(cr.param[1 - e]);
                        int nd = cross(u, w) > 0 ? 1 : -1;
                        ++f.corners;
                        if (!have_witness) {
                            f.witness = cr.point;
                            have_witness = true;
                        }
                        c = other;
                        k = long(slot[x][1 - e]);
                        d = nd;
                    }
                    faces.push_back(f);
                    bool bounded = !f.truncated;
                    if (bounded && (f.corners != 4 || f.displacement.norm() > 1e-6)) {
                        if (all_ok) {
                            failure = "complement face with " + std::to_string(f.corners) + " corners" +
                                      (f.displacement.norm() > 1e-6 ? " that is not a disc" : "");
                            witness = f.witness;
                        }
                        all_ok = false;
                    }
                }
        }
        return all_ok;
    }
};

}  // namespace detail

// Sufficient test: separated directions everywhere, then (strong mode) every
// bounded complement face of the sampled arrangement is a quadrilateral.
inline Certificate transverse_check(const TorusLamination& l1, const TorusMap& m, const TorusLamination& l2,
                                    const TransverseOptions& opt = {}) {
    m.validate();
    Certificate cert;
    cert.strong = opt.strong;
    if (l1.n_compact() == 0 || l2.n_compact() == 0) {
        cert.failure = "laminations without compact leaves are not handled";
        return cert;
    }
    if (opt.strong && (!l1.is_filling() || !l2.is_filling())) {
        cert.failure = "strong transversality needs filling laminations";
        return cert;
    }
    LamGeometry g1(l1, m.source), g2(l2, m.target);
    detail::DirectionCheck dc(g1, g2, m, opt);
    if (!dc.run()) {
        cert.failure = "directions of the two laminations meet";
        cert.witness = dc.witness;
        cert.cells = dc.cells;
        return cert;
    }
    cert.cells = dc.cells;
    cert.min_angle_gap = dc.min_gap;

    DrawOptions dopt;
    dopt.samples_per_band = opt.samples_per_band;
    dopt.window = opt.window;
    detail::Arrangement arr;
    arr.curves = draw(g1, 0, dopt);
    push_curves(arr.curves, m);
    auto c2 = draw(g2, 1, dopt);
    arr.curves.insert(arr.curves.end(), c2.begin(), c2.end());
    if (!arr.find_crossings()) {
        cert.failure = arr.failure;
        cert.witness = arr.witness;
        return cert;
    }
    cert.crossings = arr.crossings.size();
    cert.leaf_intersections.assign(l1.n_compact(), std::vector<std::size_t>(l2.n_compact(), 0));
    cert.pushed_leaf_crossings.assign(l1.n_compact(), 0);
    cert.receiving_leaf_crossings.assign(l2.n_compact(), 0);
    for (const auto& x : arr.crossings) {
        const auto& a = arr.curves[x.curve[0]];
        const auto& b = arr.curves[x.curve[1]];
        if (a.compact) ++cert.pushed_leaf_crossings[a.index];
        if (b.compact) ++cert.receiving_leaf_crossings[b.index];
        if (a.compact && b.compact) ++cert.leaf_intersections[a.index][b.index];
    }
    if (opt.strong) {
        std::vector<Face> faces;
        bool ok = true;
        arr.trace_faces(faces, ok);
        cert.faces = faces.size();
        for (const auto& f : faces) cert.bounded_faces += !f.truncated;
        if (!ok) {
            cert.failure = arr.failure;
            cert.witness = arr.witness;
            return cert;
        }
    }
    cert.ok = true;
    return cert;
}

inline Certificate strong_transverse(const TorusLamination& l1, const TorusMap& m, const TorusLamination& l2,
                                     TransverseOptions opt = {}) {
    opt.strong = true;
    return transverse_check(l1, m, l2, opt);
}

inline Certificate transverse(const TorusLamination& l1, const TorusMap& m, const TorusLamination& l2,
                              TransverseOptions opt = {}) {
    opt.strong = false;
    return transverse_check(l1, m, l2, opt);
}

}  // namespace anosov
