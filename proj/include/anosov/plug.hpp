#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/lamination.hpp"

namespace anosov {

enum class PieceKind {
    SaddleNontrivial,
    SaddlePeriodicOrbit,
    AttractingOrbit,
    RepellingOrbit,
    AttractorNontrivial,
    RepellerNontrivial,
    Anosov,  // the whole closed manifold before any surgery
};

enum class Multipliers { Positive, Negative, NotApplicable };

inline const char* to_string(PieceKind k) {
    switch (k) {
        case PieceKind::SaddleNontrivial: return "saddle_nontrivial";
        case PieceKind::SaddlePeriodicOrbit: return "saddle_periodic_orbit";
        case PieceKind::AttractingOrbit: return "attracting_orbit";
        case PieceKind::RepellingOrbit: return "repelling_orbit";
        case PieceKind::AttractorNontrivial: return "attractor_nontrivial";
        case PieceKind::RepellerNontrivial: return "repeller_nontrivial";
        case PieceKind::Anosov: return "anosov";
    }
    return "?";
}

inline const char* to_string(Multipliers m) {
    switch (m) {
        case Multipliers::Positive: return "positive";
        case Multipliers::Negative: return "negative";
        case Multipliers::NotApplicable: return "not_applicable";
    }
    return "?";
}

inline bool is_trivial(PieceKind k) {
    return k == PieceKind::SaddlePeriodicOrbit || k == PieceKind::AttractingOrbit ||
           k == PieceKind::RepellingOrbit;
}

inline bool is_attracting_kind(PieceKind k) {
    return k == PieceKind::AttractingOrbit || k == PieceKind::AttractorNontrivial;
}
inline bool is_repelling_kind(PieceKind k) {
    return k == PieceKind::RepellingOrbit || k == PieceKind::RepellerNontrivial;
}

struct BasicPiece {
    std::string id;
    PieceKind kind = PieceKind::SaddleNontrivial;
    bool transitive = true;
    Multipliers multipliers = Multipliers::NotApplicable;
    // periodic orbits available for surgery inside a nontrivial piece
    bool positive_orbits = false;
    bool negative_orbits = false;
    bool infinitely_many_negative = false;
};

struct BoundaryTorus {
    std::string id;
    Side side = Side::Entrance;
    TorusLamination lamination;
    std::string label;      // name of the torus in the ambient manifold
    std::string component;  // catalog instance it came from
};

// The crossing map sends annular gap `entrance_band` of torus `entrance` onto
// gap `exit_band` of torus `exit`; flip reverses the transverse coordinate.
struct GapLink {
    std::string entrance;
    std::size_t entrance_band = 0;
    std::string exit;
    std::size_t exit_band = 0;
    bool flip = false;
};

struct PlugMetadata {
    bool interior_hyperbolic = false;
    std::string jsj_label;
    std::vector<std::string> manifold_pieces;  // one label per catalog component
    std::vector<std::string> glue_history;     // "label -> label : matrix"
    std::vector<std::string> sub_plugs;
    std::vector<std::string> provenance;       // semi-conjugacies, surgeries
    std::vector<std::string> used_orbits;
};

struct Plug {
    std::string id;
    std::vector<BasicPiece> pieces;
    std::vector<BoundaryTorus> entrance;
    std::vector<BoundaryTorus> exit;
    std::set<std::pair<std::string, std::string>> connections;
    std::vector<GapLink> gaps;
    PlugMetadata meta;
    std::vector<Plug> parts;  // connected components when built by disjoint_union

    bool is_attracting() const { return exit.empty() && !entrance.empty(); }
    bool is_repelling() const { return entrance.empty() && !exit.empty(); }

    bool is_saddle_plug() const {
        for (const auto& p : pieces)
            if (is_attracting_kind(p.kind) || is_repelling_kind(p.kind) || p.kind == PieceKind::Anosov)
                return false;
        return true;
    }

    bool all_filling() const {
        for (const auto* side : {&entrance, &exit})
            for (const auto& t : *side)
                if (!t.lamination.is_filling()) return false;
        return true;
    }

    const BasicPiece* find_piece(const std::string& pid) const {
        for (const auto& p : pieces)
            if (p.id == pid) return &p;
        return nullptr;
    }
    BasicPiece* find_piece(const std::string& pid) {
        for (auto& p : pieces)
            if (p.id == pid) return &p;
        return nullptr;
    }

    const BoundaryTorus* find_torus(const std::string& tid) const {
        for (const auto* side : {&entrance, &exit})
            for (const auto& t : *side)
                if (t.id == tid) return &t;
        return nullptr;
    }
    BoundaryTorus* find_torus(const std::string& tid) {
        for (auto* side : {&entrance, &exit})
            for (auto& t : *side)
                if (t.id == tid) return &t;
        return nullptr;
    }

    const BoundaryTorus& torus(const std::string& tid) const {
        const auto* t = find_torus(tid);
        if (!t) throw MalformedInput("plug " + id + " has no torus " + tid);
        return *t;
    }

    std::size_t entrance_gaps() const {
        std::size_t c = 0;
        for (const auto& t : entrance) c += t.lamination.annular_gaps();
        return c;
    }
    std::size_t exit_gaps() const {
        std::size_t c = 0;
        for (const auto& t : exit) c += t.lamination.annular_gaps();
        return c;
    }

    const GapLink* link_from_entrance(const std::string& tid, std::size_t band) const {
        for (const auto& g : gaps)
            if (g.entrance == tid && g.entrance_band == band) return &g;
        return nullptr;
    }
    const GapLink* link_from_exit(const std::string& tid, std::size_t band) const {
        for (const auto& g : gaps)
            if (g.exit == tid && g.exit_band == band) return &g;
        return nullptr;
    }

    // Throws ModelError on the first broken invariant.
    void validate() const {
        std::set<std::string> ids;
        for (const auto& p : pieces)
            if (!ids.insert(p.id).second) throw ModelError("duplicate piece id " + p.id);
        std::set<std::string> tids;
        auto check_owner = [&](const std::string& o, const std::string& where) {
            if (!o.empty() && !ids.count(o)) throw ModelError("unresolved owner " + o + " on " + where);
        };
        for (const auto* side : {&entrance, &exit})
            for (const auto& t : *side) {
                if (!tids.insert(t.id).second) throw ModelError("duplicate torus id " + t.id);
                if ((side == &entrance) != (t.side == Side::Entrance))
                    throw ModelError("torus " + t.id + " listed on the wrong side");
                t.lamination.check();
                for (const auto& l : t.lamination.leaves) check_owner(l.owner, t.id);
                for (const auto& b : t.lamination.bands)
                    for (const auto& o : b.owners) check_owner(o, t.id);
                for (const auto& o : t.lamination.dense_owners) check_owner(o, t.id);
            }
        for (const auto& [u, v] : connections) {
            check_owner(u, "connections");
            check_owner(v, "connections");
        }
        for (const auto& p : pieces)
            if (p.transitive && !is_trivial(p.kind) && !connections.count({p.id, p.id}))
                throw ModelError("nontrivial transitive piece " + p.id + " lacks its self-connection");
        if (is_attracting())
            for (const auto& t : entrance)
                if (!t.lamination.is_foliation)
                    throw ModelError("attracting plug " + id + " has a non-foliated entrance torus " + t.id);
        if (is_repelling())
            for (const auto& t : exit)
                if (!t.lamination.is_foliation)
                    throw ModelError("repelling plug " + id + " has a non-foliated exit torus " + t.id);
        for (const auto& g : gaps) {
            const auto* a = find_torus(g.entrance);
            const auto* b = find_torus(g.exit);
            if (!a || !b || a->side != Side::Entrance || b->side != Side::Exit)
                throw ModelError("gap link references a bad torus");
            if (g.entrance_band >= a->lamination.n_compact() || a->lamination.bands[g.entrance_band].filled)
                throw ModelError("gap link starts on a non-annular band of " + g.entrance);
            if (g.exit_band >= b->lamination.n_compact() || b->lamination.bands[g.exit_band].filled)
                throw ModelError("gap link ends on a non-annular band of " + g.exit);
        }
        if (entrance_gaps() != exit_gaps() || gaps.size() != entrance_gaps())
            throw ModelError("annular gaps of " + id + " do not pair up between entrance and exit");
    }
};

// Renames a piece everywhere it is referenced.
inline void rename_piece(Plug& p, const std::string& from, const std::string& to) {
    for (auto& x : p.pieces)
        if (x.id == from) x.id = to;
    auto fix = [&](std::string& s) {
        if (s == from) s = to;
    };
    auto fix_set = [&](std::set<std::string>& s) {
        if (s.erase(from)) s.insert(to);
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
    p.connections = std::move(c);
}

inline Plug reverse(const Plug& p) {
    Plug r = p;
    std::swap(r.entrance, r.exit);
    for (auto& t : r.entrance) t.side = Side::Entrance;
    for (auto& t : r.exit) t.side = Side::Exit;
    r.connections.clear();
    for (const auto& [u, v] : p.connections) r.connections.insert({v, u});
    for (auto& g : r.gaps) {
        std::swap(g.entrance, g.exit);
        std::swap(g.entrance_band, g.exit_band);
    }
    for (auto& x : r.pieces) {
        switch (x.kind) {
            case PieceKind::AttractingOrbit: x.kind = PieceKind::RepellingOrbit; break;
            case PieceKind::RepellingOrbit: x.kind = PieceKind::AttractingOrbit; break;
            case PieceKind::AttractorNontrivial: x.kind = PieceKind::RepellerNontrivial; break;
            case PieceKind::RepellerNontrivial: x.kind = PieceKind::AttractorNontrivial; break;
            default: break;
        }
    }
    for (auto& q : r.parts) q = reverse(q);
    return r;
}

// Prefixes every piece and torus id with `prefix.` so copies can coexist.
inline Plug instantiate(const Plug& p, const std::string& prefix) {
    Plug r = p;
    r.id = prefix;
    for (const auto& x : p.pieces) rename_piece(r, x.id, prefix + "." + x.id);
    for (auto* side : {&r.entrance, &r.exit})
        for (auto& t : *side) {
            t.id = prefix + "." + t.id;
            t.component = prefix;
        }
    for (auto& g : r.gaps) {
        g.entrance = prefix + "." + g.entrance;
        g.exit = prefix + "." + g.exit;
    }
    return r;
}

inline Plug disjoint_union(const Plug& a, const Plug& b, const std::string& id) {
    for (const auto& x : a.pieces)
        if (b.find_piece(x.id)) throw ModelError("disjoint_union: piece id " + x.id + " used twice");
    for (const auto* side : {&a.entrance, &a.exit})
        for (const auto& t : *side)
            if (b.find_torus(t.id)) throw ModelError("disjoint_union: torus id " + t.id + " used twice");
    Plug r;
    r.id = id;
    for (const auto* x : {&a, &b}) {
        if (x->parts.empty())
            r.parts.push_back(*x);
        else
            r.parts.insert(r.parts.end(), x->parts.begin(), x->parts.end());
    }
    r.pieces = a.pieces;
    r.pieces.insert(r.pieces.end(), b.pieces.begin(), b.pieces.end());
    r.entrance = a.entrance;
    r.entrance.insert(r.entrance.end(), b.entrance.begin(), b.entrance.end());
    r.exit = a.exit;
    r.exit.insert(r.exit.end(), b.exit.begin(), b.exit.end());
    r.connections = a.connections;
    r.connections.insert(b.connections.begin(), b.connections.end());
    r.gaps = a.gaps;
    r.gaps.insert(r.gaps.end(), b.gaps.begin(), b.gaps.end());
    r.meta.interior_hyperbolic = a.meta.interior_hyperbolic && b.meta.interior_hyperbolic;
    r.meta.jsj_label = a.meta.jsj_label + " + " + b.meta.jsj_label;
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

}  // namespace anosov
