#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/graph.hpp"
#include "anosov/plug.hpp"
#include "anosov/transversality.hpp"

namespace anosov {

struct GluingPair {
    std::string exit;
    std::string entrance;
    TorusMap map;
    std::optional<Certificate> cert;
};

struct GluingSpec {
    std::vector<GluingPair> pairs;
};

inline Certificate certify_pair(const TorusLamination& out, const TorusMap& m, const TorusLamination& in) {
    if (out.is_filling() && in.is_filling()) return strong_transverse(out, m, in);
    return transverse(out, m, in);
}

namespace detail {

constexpr double kOverlapEps = 1e-12;

struct Spot {
    std::size_t band;
    double t;
};

inline Spot locate(const std::vector<double>& pos, double x) {
    double base = pos[0];
    double xr = base + frac(x - base);
    auto it = std::upper_bound(pos.begin(), pos.end(), xr);
    std::size_t i = std::size_t(it - pos.begin()) - 1;
    double w = i + 1 < pos.size() ? pos[i + 1] - pos[i] : pos[0] + 1.0 - pos[i];
    return {i, (xr - pos[i]) / w};
}

inline double band_left(const std::vector<double>& pos, std::size_t i) { return pos[i]; }
inline double band_width(const std::vector<double>& pos, std::size_t i) {
    return i + 1 < pos.size() ? pos[i + 1] - pos[i] : pos[0] + 1.0 - pos[i];
}

// Parts of the lifted interval [lo, hi] (length < 1) inside band i, in band
// coordinates.
inline std::vector<std::pair<double, double>> overlap_in_band(const std::vector<double>& pos, std::size_t i,
                                                              double lo, double hi) {
    std::vector<std::pair<double, double>> out;
    double a = band_left(pos, i), w = band_width(pos, i);
    for (int k = -2; k <= 2; ++k) {
        double l = std::max(lo + k, a), h = std::min(hi + k, a + w);
        if (h - l > kOverlapEps) out.push_back({(l - a) / w, (h - a) / w});
    }
    return out;
}

struct Insertion {
    std::size_t band;
    double t;
    CompactLeaf leaf;
};

struct Fill {
    std::size_t band;
    double t0, t1;
    std::set<std::string> owners;
};

// Pending changes to one boundary torus that is not itself glued.
struct TorusUpdate {
    std::vector<Insertion> insert;
    std::vector<Fill> fills;
};

struct Rebuilt {
    TorusLamination lam;
    std::vector<std::size_t> start;          // first new band of each old band
    std::vector<std::vector<double>> cuts;   // sorted insertion parameters per old band
    std::vector<std::pair<std::size_t, double>> mid;  // old band and mid parameter of each new band

    std::size_t band_of(std::size_t old, double t) const {
        const auto& c = cuts[old];
        return start[old] + std::size_t(std::lower_bound(c.begin(), c.end(), t) - c.begin());
    }
};

inline Rebuilt rebuild(const TorusLamination& old, std::vector<Insertion> ins, const std::vector<Fill>& fills) {
    std::size_t n = old.n_compact();
    Rebuilt r;
    r.lam.leaf_class = old.leaf_class;
    r.lam.is_foliation = old.is_foliation;
    r.lam.dense_owners = old.dense_owners;
    r.start.assign(n, 0);
    r.cuts.assign(n, {});
    std::sort(ins.begin(), ins.end(), [](const Insertion& a, const Insertion& b) {
        return a.band != b.band ? a.band < b.band : a.t < b.t;
    });
    for (std::size_t i = 0; i < n; ++i) {
        r.lam.leaves.push_back(old.leaves[i]);
        r.start[i] = r.lam.bands.size();
        std::vector<double> edges = {0.0};
        for (const auto& x : ins)
            if (x.band == i) {
                if (!(x.t > 0 && x.t < 1)) throw ModelError("surviving leaf lands on a compact leaf");
                if (!r.cuts[i].empty() && std::fabs(r.cuts[i].back() - x.t) < kOverlapEps)
                    throw ModelError("two surviving leaves coincide");
                r.cuts[i].push_back(x.t);
                edges.push_back(x.t);
            }
        edges.push_back(1.0);
        if (!r.cuts[i].empty() && old.bands[i].filled)
            throw ModelError("surviving compact leaf inside a filled band");
        for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
            Band b = old.bands[i];
            for (const auto& f : fills)
                if (f.band == i && std::min(f.t1, edges[s + 1]) - std::max(f.t0, edges[s]) > kOverlapEps) {
                    b.filled = true;
                    b.owners.insert(f.owners.begin(), f.owners.end());
                    r.lam.dense_owners.insert(f.owners.begin(), f.owners.end());
                }
            r.lam.bands.push_back(b);
            r.mid.push_back({i, (edges[s] + edges[s + 1]) / 2});
            if (s + 1 < edges.size() - 1) {
                for (const auto& x : ins)
                    if (x.band == i && x.t == edges[s + 1]) r.lam.leaves.push_back(x.leaf);
            }
        }
    }
    return r;
}

inline std::set<std::string> all_owners(const TorusLamination& l) {
    std::set<std::string> s;
    for (const auto& x : l.leaves)
        if (!x.owner.empty()) s.insert(x.owner);
    for (std::size_t i = 0; i < l.n_compact(); ++i)
        if (l.bands[i].filled)
            for (const auto& o : l.owners_of_band(i)) s.insert(o);
    return s;
}

// Owners of pushed items of `from` that meet items of `to`, as pairs
// (owner on `from`, owner on `to`).
inline std::set<std::pair<std::string, std::string>> meets(const TorusLamination& from,
                                                           const std::vector<double>& pf, const TorusMap& m,
                                                           const TorusLamination& to,
                                                           const std::vector<double>& pt) {
    std::set<std::pair<std::string, std::string>> out;
    auto add = [&](const std::set<std::string>& a, const std::set<std::string>& b) {
        for (const auto& x : a)
            for (const auto& y : b)
                if (!x.empty() && !y.empty()) out.insert({x, y});
    };
    if (!m.preserves_vertical()) {
        add(all_owners(from), all_owners(to));
        return out;
    }
    double a = double(m.matrix.a), s = to_double(m.sx);
    for (std::size_t k = 0; k < from.n_compact(); ++k) {
        Spot sp = locate(pt, a * pf[k] + s);
        if (to.bands[sp.band].filled && sp.t > 0) add({from.leaves[k].owner}, to.owners_of_band(sp.band));
    }
    for (std::size_t k = 0; k < from.n_compact(); ++k) {
        if (!from.bands[k].filled) continue;
        double x0 = a * pf[k] + s, x1 = a * (pf[k] + band_width(pf, k)) + s;
        double lo = std::min(x0, x1), hi = std::max(x0, x1);
        auto own = from.owners_of_band(k);
        for (std::size_t l = 0; l < to.n_compact(); ++l)
            for (int j = -2; j <= 2; ++j)
                if (pt[l] + j > lo && pt[l] + j < hi) add(own, {to.leaves[l].owner});
        for (std::size_t l = 0; l < to.n_compact(); ++l)
            if (to.bands[l].filled && !overlap_in_band(pt, l, lo, hi).empty()) add(own, to.owners_of_band(l));
    }
    return out;
}

// Transports what `from` leaves in the annular gaps of `to` through the gap
// links of `to`'s plug. `link(band)` returns the far torus, band and flip.
struct LinkTarget {
    std::string torus;
    std::size_t band;
    bool flip;
};

template <class LinkFn>
void transport(const TorusLamination& from, const std::vector<double>& pf, const TorusMap& m,
               const TorusLamination& to, const std::vector<double>& pt, LinkFn link,
               std::map<std::string, TorusUpdate>& updates, std::vector<bool>& survives) {
    survives.assign(from.n_compact(), false);
    if (!m.preserves_vertical()) {
        auto own = all_owners(from);
        for (std::size_t j = 0; j < to.n_compact(); ++j)
            if (!to.bands[j].filled) {
                LinkTarget lt = link(j);
                updates[lt.torus].fills.push_back({lt.band, 0.0, 1.0, own});
            }
        return;
    }
    double a = double(m.matrix.a), s = to_double(m.sx);
    for (std::size_t k = 0; k < from.n_compact(); ++k) {
        Spot sp = locate(pt, a * pf[k] + s);
        if (sp.t <= 1e-12 || sp.t >= 1 - 1e-12) throw ModelError("pushed compact leaf coincides with a receiving leaf");
        if (to.bands[sp.band].filled) continue;
        survives[k] = true;
        LinkTarget lt = link(sp.band);
        CompactLeaf leaf = from.leaves[k];
        int sign = m.vertical_sign() * (lt.flip ? -1 : 1);
        if (sign < 0) leaf.orientation = -leaf.orientation;
        leaf.id += "'";
        updates[lt.torus].insert.push_back({lt.band, lt.flip ? 1 - sp.t : sp.t, leaf});
    }
    for (std::size_t k = 0; k < from.n_compact(); ++k) {
        if (!from.bands[k].filled) continue;
        double x0 = a * pf[k] + s, x1 = a * (pf[k] + band_width(pf, k)) + s;
        double lo = std::min(x0, x1), hi = std::max(x0, x1);
        auto own = from.owners_of_band(k);
        for (std::size_t j = 0; j < to.n_compact(); ++j) {
            if (to.bands[j].filled) continue;
            LinkTarget lt = link(j);
            for (auto [t0, t1] : overlap_in_band(pt, j, lo, hi)) {
                if (lt.flip) std::tie(t0, t1) = std::make_pair(1 - t1, 1 - t0);
                updates[lt.torus].fills.push_back({lt.band, t0, t1, own});
            }
        }
    }
}

inline std::string pair_label(const BoundaryTorus& out, const BoundaryTorus& in, const TorusMap& m) {
    return out.label + " -> " + in.label + " : " + m.matrix.str();
}

inline void check_pairs_shape(const std::vector<GluingPair>& pairs, const Plug& src, const Plug& dst) {
    std::set<std::string> used;
    for (const auto& g : pairs) {
        const auto* o = src.find_torus(g.exit);
        const auto* i = dst.find_torus(g.entrance);
        if (!o) throw MalformedInput("unknown exit torus " + g.exit);
        if (!i) throw MalformedInput("unknown entrance torus " + g.entrance);
        if (o->side != Side::Exit) throw MalformedInput("torus " + g.exit + " is not an exit torus");
        if (i->side != Side::Entrance) throw MalformedInput("torus " + g.entrance + " is not an entrance torus");
        if (!used.insert(g.exit).second || !used.insert(g.entrance).second)
            throw MalformedInput("a torus appears in more than one gluing pair");
    }
}

inline void set_foliation_flags(Plug& p) {
    for (auto& t : p.entrance) t.lamination.is_foliation = p.exit.empty();
    for (auto& t : p.exit) t.lamination.is_foliation = p.entrance.empty();
    for (auto* side : {&p.entrance, &p.exit})
        for (auto& t : *side)
            if (t.lamination.is_foliation && !t.lamination.is_filling())
                throw ModelError("torus " + t.id + " must carry a foliation but has annular gaps");
}

}  // namespace detail

// Glues exit tori of a to entrance tori of b. Every pair must certify as
// transverse; the pair's certificate is computed when missing.
inline Plug glue(const Plug& a, const Plug& b, GluingSpec& g, const std::string& id = "") {
    using namespace detail;
    if (g.pairs.empty()) throw MalformedInput("glue needs at least one pair");
    check_pairs_shape(g.pairs, a, b);
    for (const auto& x : a.pieces)
        if (b.find_piece(x.id)) throw ModelError("glue: piece id " + x.id + " used by both plugs");
    for (auto& pr : g.pairs) {
        if (!pr.cert) pr.cert = certify_pair(a.torus(pr.exit).lamination, pr.map, b.torus(pr.entrance).lamination);
        if (!pr.cert->ok)
            throw PreconditionViolation("gluing pair " + pr.exit + "->" + pr.entrance +
                                        " is not transverse: " + pr.cert->failure);
    }
    std::set<std::string> glued;
    for (const auto& pr : g.pairs) glued.insert({pr.exit, pr.entrance});

    Plug r;
    r.id = id.empty() ? a.id + "*" + b.id : id;
    r.pieces = a.pieces;
    r.pieces.insert(r.pieces.end(), b.pieces.begin(), b.pieces.end());
    r.connections = a.connections;
    r.connections.insert(b.connections.begin(), b.connections.end());

    std::map<std::string, TorusUpdate> updates;
    bool all_strong = true;
    for (const auto& pr : g.pairs) {
        const auto& out = a.torus(pr.exit).lamination;
        const auto& in = b.torus(pr.entrance).lamination;
        auto pf = pr.map.source.resolve(out.n_compact());
        auto pt = pr.map.target.resolve(in.n_compact());
        all_strong = all_strong && pr.cert->strong;
        auto e = meets(out, pf, pr.map, in, pt);
        r.connections.insert(e.begin(), e.end());

        std::vector<bool> surv;
        transport(out, pf, pr.map, in, pt,
                  [&](std::size_t band) {
                      const auto* l = b.link_from_entrance(pr.entrance, band);
                      if (!l) throw ModelError("annular gap of " + pr.entrance + " has no gap link");
                      return LinkTarget{l->exit, l->exit_band, l->flip};
                  },
                  updates, surv);
        for (std::size_t k = 0; k < surv.size(); ++k)
            if (surv[k] != (pr.cert->pushed_leaf_crossings[k] == 0))
                throw ModelError("leaf bookkeeping disagrees with the arrangement on " + pr.exit);

        TorusMap inv = pr.map.inverse();
        transport(in, pt, inv, out, pf,
                  [&](std::size_t band) {
                      const auto* l = a.link_from_exit(pr.exit, band);
                      if (!l) throw ModelError("annular gap of " + pr.exit + " has no gap link");
                      return LinkTarget{l->entrance, l->entrance_band, l->flip};
                  },
                  updates, surv);
        for (std::size_t k = 0; k < surv.size(); ++k)
            if (surv[k] != (pr.cert->receiving_leaf_crossings[k] == 0))
                throw ModelError("leaf bookkeeping disagrees with the arrangement on " + pr.entrance);
        r.meta.glue_history.push_back(pair_label(a.torus(pr.exit), b.torus(pr.entrance), pr.map));
    }

    std::map<std::string, Rebuilt> rebuilt;
    auto take = [&](const BoundaryTorus& t, std::vector<BoundaryTorus>& dst) {
        if (glued.count(t.id)) return;
        BoundaryTorus c = t;
        auto it = updates.find(t.id);
        Rebuilt rb = rebuild(t.lamination, it == updates.end() ? std::vector<Insertion>{} : it->second.insert,
                             it == updates.end() ? std::vector<Fill>{} : it->second.fills);
        c.lamination = rb.lam;
        rebuilt[t.id] = rb;
        dst.push_back(c);
    };
    for (const auto& t : a.entrance) take(t, r.entrance);
    for (const auto& t : b.entrance) take(t, r.entrance);
    for (const auto& t : a.exit) take(t, r.exit);
    for (const auto& t : b.exit) take(t, r.exit);

    // Follow each remaining annular gap of the new entrance boundary to the
    // exit gap it crosses into.
    std::map<std::string, const GluingPair*> by_exit;
    for (const auto& pr : g.pairs) by_exit[pr.exit] = &pr;
    for (const auto& t : r.entrance) {
        const auto& rb = rebuilt.at(t.id);
        bool from_a = a.find_torus(t.id) != nullptr;
        for (std::size_t beta = 0; beta < t.lamination.n_compact(); ++beta) {
            if (t.lamination.bands[beta].filled) continue;
            auto [old_band, tm] = rb.mid[beta];
            const Plug& owner = from_a ? a : b;
            const auto* l = owner.link_from_entrance(t.id, old_band);
            if (!l) throw ModelError("lost gap link on " + t.id);
            double tt = l->flip ? 1 - tm : tm;
            bool flip = l->flip;
            std::string far = l->exit;
            std::size_t far_band = l->exit_band;
            if (from_a && by_exit.count(far)) {
                const GluingPair& pr = *by_exit.at(far);
                if (!pr.map.preserves_vertical()) throw ModelError("annular gap crosses a non-vertical gluing");
                const auto& out = a.torus(far).lamination;
                const auto& in = b.torus(pr.entrance).lamination;
                auto pf = pr.map.source.resolve(out.n_compact());
                auto pt = pr.map.target.resolve(in.n_compact());
                double x = pf[far_band] + tt * band_width(pf, far_band);
                Spot sp = locate(pt, double(pr.map.matrix.a) * x + to_double(pr.map.sx));
                if (in.bands[sp.band].filled) throw ModelError("annular gap runs into a filled band");
                const auto* l2 = b.link_from_entrance(pr.entrance, sp.band);
                if (!l2) throw ModelError("annular gap of " + pr.entrance + " has no gap link");
                bool rev = pr.map.matrix.a < 0;
                tt = l2->flip ? 1 - sp.t : sp.t;
                flip = flip != (rev != l2->flip);
                far = l2->exit;
                far_band = l2->exit_band;
            }
            const auto& frb = rebuilt.at(far);
            std::size_t nb = frb.band_of(far_band, tt);
            if (frb.lam.bands[nb].filled) throw ModelError("annular gap ends on a filled band of " + far);
            r.gaps.push_back({t.id, beta, far, nb, flip});
        }
    }

    if (all_strong)
        for (const auto* side : {&r.entrance, &r.exit})
            for (const auto& t : *side)
                if (updates.count(t.id) && !t.lamination.is_filling())
                    throw ModelError("filling propagation violated on " + t.id);

    set_foliation_flags(r);
    r.meta.interior_hyperbolic = a.meta.interior_hyperbolic && b.meta.interior_hyperbolic;
    r.meta.jsj_label = a.meta.jsj_label + " | " + b.meta.jsj_label;
    for (const auto* x : {&a, &b}) {
        r.meta.manifold_pieces.insert(r.meta.manifold_pieces.end(), x->meta.manifold_pieces.begin(),
                                      x->meta.manifold_pieces.end());
        r.meta.glue_history.insert(r.meta.glue_history.end(), x->meta.glue_history.begin(),
                                   x->meta.glue_history.end());
        r.meta.sub_plugs.push_back(x->id);
        r.meta.sub_plugs.insert(r.meta.sub_plugs.end(), x->meta.sub_plugs.begin(), x->meta.sub_plugs.end());
        r.meta.provenance.insert(r.meta.provenance.end(), x->meta.provenance.begin(), x->meta.provenance.end());
        r.meta.used_orbits.insert(r.meta.used_orbits.end(), x->meta.used_orbits.begin(),
                                  x->meta.used_orbits.end());
    }
    r.validate();
    return r;
}

enum class AnosovStatus { Direct, Realizable, NotCertified };

inline const char* to_string(AnosovStatus s) {
    switch (s) {
        case AnosovStatus::Direct: return "direct";
        case AnosovStatus::Realizable: return "realizable";
        case AnosovStatus::NotCertified: return "not_certified";
    }
    return "?";
}

struct ManifoldDescriptor {
    std::vector<std::string> pieces;
    std::vector<std::string> gluings;
    bool operator==(const ManifoldDescriptor&) const = default;
};

struct Hypothesis {
    std::string name;
    bool holds = false;
};

struct ClosedModel {
    Plug plug;
    Graph graph;
    AnosovStatus status = AnosovStatus::NotCertified;
    bool transitive = false;
    bool closed = false;
    std::vector<Hypothesis> hypotheses;
    std::vector<GluingPair> pairs;
    std::map<std::string, std::string> invariants;
    std::string jsj;

    ManifoldDescriptor descriptor() const {
        ManifoldDescriptor d{plug.meta.manifold_pieces, plug.meta.glue_history};
        std::sort(d.pieces.begin(), d.pieces.end());
        std::sort(d.gluings.begin(), d.gluings.end());
        return d;
    }
};

inline Graph transitivity_graph(const Plug& p) {
    Graph g;
    for (const auto& x : p.pieces) g.add_node(x.id);
    for (const auto& [u, v] : p.connections) g.add_edge(u, v);
    return g;
}

inline Graph transitivity_graph(const ClosedModel& m) { return m.graph; }

namespace detail {

// Merges strongly connected groups of pieces into single pieces.
inline void condense(Plug& p, const Graph& g) {
    auto comps = strongly_connected_components(g);
    std::map<std::string, std::string> to;
    std::vector<BasicPiece> pieces;
    for (const auto& c : comps) {
        if (c.size() == 1) {
            to[c[0]] = c[0];
            pieces.push_back(*p.find_piece(c[0]));
            continue;
        }
        BasicPiece m;
        m.id = "[";
        for (std::size_t i = 0; i < c.size(); ++i) m.id += (i ? "+" : "") + c[i];
        m.id += "]";
        m.kind = PieceKind::SaddleNontrivial;
        m.transitive = true;
        for (const auto& x : c) {
            const auto* q = p.find_piece(x);
            m.positive_orbits = m.positive_orbits || q->positive_orbits || q->multipliers == Multipliers::Positive;
            m.negative_orbits = m.negative_orbits || q->negative_orbits || q->multipliers == Multipliers::Negative;
            m.infinitely_many_negative = m.infinitely_many_negative || q->infinitely_many_negative;
            to[x] = m.id;
        }
        pieces.push_back(m);
    }
    std::sort(pieces.begin(), pieces.end(), [](const BasicPiece& x, const BasicPiece& y) { return x.id < y.id; });
    p.pieces = pieces;
    auto fix = [&](std::string& s) {
        if (!s.empty()) s = to.at(s);
    };
    auto fix_set = [&](std::set<std::string>& s) {
        std::set<std::string> r;
        for (auto x : s) {
            fix(x);
            r.insert(x);
        }
        s = r;
    };
    for (auto* side : {&p.entrance, &p.exit})
        for (auto& t : *side) {
            for (auto& l : t.lamination.leaves) fix(l.owner);
            for (auto& b : t.lamination.bands) fix_set(b.owners);
            fix_set(t.lamination.dense_owners);
        }
    std::set<std::pair<std::string, std::string>> c;
    for (auto [u, v] : p.connections) {
        fix(u);
        fix(v);
        c.insert({u, v});
    }
    for (const auto& x : p.pieces)
        if (x.id.front() == '[') c.insert({x.id, x.id});
    p.connections = c;
}

inline void set_kinds_for_boundary(Plug& p) {
    for (auto& x : p.pieces) {
        if (is_trivial(x.kind)) continue;
        if (p.entrance.empty() && p.exit.empty())
            x.kind = PieceKind::Anosov;
        else if (p.exit.empty())
            x.kind = PieceKind::AttractorNontrivial;
        else if (p.entrance.empty())
            x.kind = PieceKind::RepellerNontrivial;
        else
            x.kind = PieceKind::SaddleNontrivial;
    }
}

inline ClosedModel self_glue_cyclic(const Plug& p, GluingSpec& g, const std::string& id) {
    check_pairs_shape(g.pairs, p, p);
    ClosedModel m;
    bool all_ok = true, all_strong = true, all_filling = true;
    Plug r = p;
    r.id = id.empty() ? p.id + "/glued" : id;
    r.parts.clear();
    std::set<std::string> glued;
    for (auto& pr : g.pairs) {
        const auto& out = p.torus(pr.exit).lamination;
        const auto& in = p.torus(pr.entrance).lamination;
        if (!pr.cert) pr.cert = certify_pair(out, pr.map, in);
        all_ok = all_ok && pr.cert->ok;
        all_strong = all_strong && pr.cert->ok && pr.cert->strong;
        all_filling = all_filling && out.is_filling() && in.is_filling();
        glued.insert(pr.exit);
        glued.insert(pr.entrance);
        if (pr.cert->ok) {
            auto e = meets(out, pr.map.source.resolve(out.n_compact()), pr.map, in,
                           pr.map.target.resolve(in.n_compact()));
            r.connections.insert(e.begin(), e.end());
        }
        r.meta.glue_history.push_back(pair_label(p.torus(pr.exit), p.torus(pr.entrance), pr.map));
    }
    bool saddle = p.is_saddle_plug();
    m.hypotheses = {{"all pairs transverse", all_ok},
                    {"all certificates strong", all_strong},
                    {"glued laminations filling", all_filling},
                    {"saddle plug", saddle}};
    m.pairs = g.pairs;

    std::erase_if(r.entrance, [&](const BoundaryTorus& t) { return glued.count(t.id) > 0; });
    std::erase_if(r.exit, [&](const BoundaryTorus& t) { return glued.count(t.id) > 0; });
    for (const auto& gl : p.gaps)
        if (glued.count(gl.entrance) || glued.count(gl.exit))
            if (!(glued.count(gl.entrance) && glued.count(gl.exit)))
                throw Unsupported("partial self-gluing across an annular gap");
    std::erase_if(r.gaps, [&](const GapLink& gl) { return glued.count(gl.entrance) > 0; });
    m.closed = r.entrance.empty() && r.exit.empty();
    m.graph = transitivity_graph(r);
    m.status = (all_ok && all_strong && all_filling && saddle) ? AnosovStatus::Realizable : AnosovStatus::NotCertified;
    m.transitive = m.status != AnosovStatus::NotCertified && is_combinatorially_transitive(m.graph);
    if (!m.closed) {
        if (m.status == AnosovStatus::NotCertified)
            throw PreconditionViolation("partial self-gluing needs strong certificates on filling laminations");
        condense(r, m.graph);
        // recirculating leaves fill what is left, compact leaves stay put
        for (auto* side : {&r.entrance, &r.exit})
            for (auto& t : *side) {
                for (auto& b : t.lamination.bands)
                    if (!b.filled) throw Unsupported("partial self-gluing with annular gaps left on " + t.id);
            }
        set_foliation_flags(r);
        set_kinds_for_boundary(r);
    }
    r.validate();
    m.plug = r;
    return m;
}

}  // namespace detail

inline ClosedModel self_glue(const Plug& p, GluingSpec& g, const std::string& id = "") {
    using namespace detail;
    if (g.pairs.empty()) throw MalformedInput("self_glue needs at least one pair");
    check_pairs_shape(g.pairs, p, p);
    // Pairs running between components without a cycle reduce to ordinary
    // gluings; the result is then closed along foliated boundaries.
    if (p.parts.size() >= 2) {
        std::map<std::string, std::size_t> comp;
        for (std::size_t i = 0; i < p.parts.size(); ++i)
            for (const auto* side : {&p.parts[i].entrance, &p.parts[i].exit})
                for (const auto& t : *side) comp[t.id] = i;
        Graph cg;
        bool crossing = true;
        for (std::size_t i = 0; i < p.parts.size(); ++i) cg.add_node(std::to_string(i));
        for (const auto& pr : g.pairs) {
            std::size_t u = comp.at(pr.exit), v = comp.at(pr.entrance);
            if (u == v) crossing = false;
            cg.add_edge(std::to_string(u), std::to_string(v));
        }
        auto sccs = strongly_connected_components(cg);
        if (crossing && sccs.size() == p.parts.size()) {
            std::vector<std::size_t> order;
            for (auto it = sccs.rbegin(); it != sccs.rend(); ++it) order.push_back(std::stoul((*it)[0]));
            Plug acc = p.parts[order[0]];
            std::set<std::size_t> in_acc = {order[0]};
            std::vector<GluingPair> done;
            for (std::size_t s = 1; s < order.size(); ++s) {
                const Plug& next = p.parts[order[s]];
                GluingSpec step;
                for (const auto& pr : g.pairs)
                    if (in_acc.count(comp.at(pr.exit)) && comp.at(pr.entrance) == order[s]) step.pairs.push_back(pr);
                if (step.pairs.empty()) {
                    acc = disjoint_union(acc, next, acc.id + "+" + next.id);
                } else {
                    acc = glue(acc, next, step, acc.id + "*" + next.id);
                    done.insert(done.end(), step.pairs.begin(), step.pairs.end());
                }
                acc.parts.clear();
                in_acc.insert(order[s]);
            }
            ClosedModel m;
            acc.id = id.empty() ? p.id + "/glued" : id;
            m.closed = acc.entrance.empty() && acc.exit.empty();
            m.pairs = done;
            m.graph = transitivity_graph(acc);
            bool foliated = true;
            for (const auto& pr : done)
                foliated = foliated && (p.torus(pr.entrance).lamination.is_foliation ||
                                        p.torus(pr.exit).lamination.is_foliation);
            m.hypotheses = {{"all pairs transverse", true},
                            {"pairs acyclic between components", true},
                            {"one side of every pair foliated", foliated}};
            m.status = (m.closed && foliated) ? AnosovStatus::Direct : AnosovStatus::NotCertified;
            m.transitive = m.status != AnosovStatus::NotCertified && is_combinatorially_transitive(m.graph);
            g.pairs = done;
            m.plug = acc;
            return m;
        }
    }
    return self_glue_cyclic(p, g, id);
}

}  // namespace anosov
