#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anosov/catalog.hpp"
#include "anosov/errors.hpp"
#include "anosov/gluing.hpp"
#include "anosov/gluing_maps.hpp"

namespace anosov {

enum class DADirection { Attracting, Repelling };

inline const char* to_string(DADirection d) { return d == DADirection::Attracting ? "attracting" : "repelling"; }

struct OrbitHandle {
    std::string piece;
    std::string name;
};

struct DASpec {
    OrbitHandle orbit;
    DADirection direction = DADirection::Attracting;
    Multipliers multipliers = Multipliers::Positive;
    bool free_separatrix = false;
    int requested_leaves = 0;  // 0: whatever the multipliers give
};

namespace detail {

// "M" or "M\N(a,b)": the manifold label with excised tubes.
inline std::string excise_label(const std::string& label, const std::string& orbit) {
    std::string base = label;
    std::vector<std::string> names;
    auto at = label.find("\\N(");
    if (at != std::string::npos) {
        base = label.substr(0, at);
        std::string inner = label.substr(at + 3, label.size() - at - 4);
        std::size_t from = 0;
        while (from <= inner.size()) {
            auto comma = inner.find(',', from);
            if (comma == std::string::npos) comma = inner.size();
            names.push_back(inner.substr(from, comma - from));
            from = comma + 1;
        }
    }
    names.push_back(orbit);
    std::sort(names.begin(), names.end());
    std::string s = base + "\\N(";
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
    return s + ")";
}

}  // namespace detail

// DA bifurcation along a periodic orbit of a nontrivial piece, followed by
// excision of a tube around the new attracting (repelling) orbit.
inline Plug da_bifurcation(const Plug& p, const DASpec& s) {
    if (s.free_separatrix) throw PreconditionViolation("DA orbit must have no free separatrix");
    if (s.multipliers == Multipliers::NotApplicable)
        throw MalformedInput("DA needs positive or negative multipliers");
    if (s.multipliers == Multipliers::Negative && s.requested_leaves == 2)
        throw PreconditionViolation("negative multipliers give one compact leaf, not two");
    if (s.multipliers == Multipliers::Positive && s.requested_leaves == 1)
        throw PreconditionViolation("positive multipliers give two compact leaves, not one");
    const BasicPiece* piece = p.find_piece(s.orbit.piece);
    if (!piece) throw MalformedInput("no piece " + s.orbit.piece + " in plug " + p.id);
    if (is_trivial(piece->kind))
        throw PreconditionViolation("DA on an isolated periodic orbit leaves free separatrices");
    if (s.multipliers == Multipliers::Positive && !piece->positive_orbits)
        throw PreconditionViolation("piece " + piece->id + " has no orbit with positive multipliers");
    if (s.multipliers == Multipliers::Negative && !piece->negative_orbits)
        throw PreconditionViolation("piece " + piece->id + " has no orbit with negative multipliers");
    if (std::find(p.meta.used_orbits.begin(), p.meta.used_orbits.end(), s.orbit.name) != p.meta.used_orbits.end())
        throw PreconditionViolation("orbit " + s.orbit.name + " was already used for surgery");

    Plug r = p;
    r.parts.clear();
    std::string np = piece->id + "'";
    PieceKind kind = piece->kind;
    rename_piece(r, piece->id, np);
    BasicPiece* q = r.find_piece(np);
    bool attracting = s.direction == DADirection::Attracting;
    if (kind == PieceKind::Anosov)
        q->kind = attracting ? PieceKind::RepellerNontrivial : PieceKind::AttractorNontrivial;
    else if (kind == PieceKind::AttractorNontrivial && attracting)
        q->kind = PieceKind::SaddleNontrivial;
    else if (kind == PieceKind::RepellerNontrivial && !attracting)
        q->kind = PieceKind::SaddleNontrivial;

    std::size_t leaves = s.multipliers == Multipliers::Positive ? 2 : 1;
    Side side = attracting ? Side::Exit : Side::Entrance;
    Sign o = dynamical_to_contracting(side, Sign::Plus);
    auto lam = TorusLamination::from_orientations(std::vector<Sign>(leaves, o), true, np);
    BoundaryTorus t;
    t.id = p.id + ".N(" + s.orbit.name + ")";
    t.side = side;
    t.label = "N(" + s.orbit.name + ")";
    t.component = p.id;
    for (std::size_t i = 0; i < lam.leaves.size(); ++i) lam.leaves[i].id = t.id + ".g" + std::to_string(i);
    t.lamination = lam;
    if (r.find_torus(t.id)) throw PreconditionViolation("torus " + t.id + " already exists");
    (attracting ? r.exit : r.entrance).push_back(t);
    detail::set_foliation_flags(r);

    if (r.meta.manifold_pieces.size() == 1)
        r.meta.manifold_pieces[0] = detail::excise_label(r.meta.manifold_pieces[0], s.orbit.name);
    r.meta.used_orbits.push_back(s.orbit.name);
    r.meta.provenance.push_back("semi-conjugacy " + np + " -> " + piece->id);
    r.meta.provenance.push_back(std::string(to_string(s.direction)) + " DA (" + to_string(s.multipliers) +
                                ") on " + s.orbit.name + ", excised as " + t.id);
    r.validate();
    return r;
}

inline std::string nontrivial_piece(const Plug& p) {
    std::string found;
    for (const auto& x : p.pieces)
        if (!is_trivial(x.kind)) {
            if (!found.empty()) throw PreconditionViolation("plug " + p.id + " has several nontrivial pieces");
            found = x.id;
        }
    if (found.empty()) throw PreconditionViolation("plug " + p.id + " has no nontrivial piece");
    return found;
}

// Attracting DA on o1, repelling DA on o2, then the new exit torus is glued
// back onto the new entrance torus.
inline ClosedModel blow_up_excise_glue(const Plug& base, const OrbitHandle& o1, const OrbitHandle& o2,
                                       const std::string& id = "") {
    if (o1.name == o2.name) throw PreconditionViolation("blow-up needs two distinct orbits");
    if (!base.entrance.empty() || !base.exit.empty())
        throw PreconditionViolation("blow-up starts from a closed manifold");
    Plug u = da_bifurcation(base, {o1, DADirection::Attracting, Multipliers::Positive});
    OrbitHandle h2 = o2;
    if (h2.piece == o1.piece) h2.piece += "'";
    u = da_bifurcation(u, {h2, DADirection::Repelling, Multipliers::Positive});
    const auto& out = u.exit.back();
    const auto& in = u.entrance.back();
    GluingSpec g{{{out.id, in.id, coherent_gluing(out.lamination, in.lamination), std::nullopt}}};
    ClosedModel m = self_glue(u, g, id.empty() ? base.id + "/richer" : id);
    m.plug.meta.provenance.push_back("richer dynamics: " + o1.name + " and " + o2.name + " blown up");
    return m;
}

// Franks-Williams shaped pair and the mixed 2-cycle on the same manifold.
inline std::pair<ClosedModel, ClosedModel> build_both_flows() {
    OrbitHandle o{"X", "O"}, o2{"X", "O'"};
    auto base = [](const std::string& id) { return catalog_anosov_base(id); };
    auto da = [](const Plug& p, const std::string& orbit, DADirection d) {
        std::string piece = nontrivial_piece(p);
        return da_bifurcation(p, {{piece, orbit}, d, Multipliers::Positive});
    };
    const auto A = DADirection::Attracting, R = DADirection::Repelling;
    Plug x1 = da(da(base("X1"), o.name, A), o2.name, A);
    Plug x2 = da(da(base("X2"), o.name, R), o2.name, R);
    Plug x3 = da(da(base("X3"), o.name, A), o2.name, R);
    Plug x4 = da(da(base("X4"), o.name, R), o2.name, A);

    auto pair_for = [](const Plug& from, const Plug& to, const std::string& orbit) {
        const auto& out = from.torus(from.id + ".N(" + orbit + ")");
        const auto& in = to.torus(to.id + ".N(" + orbit + ")");
        return GluingPair{out.id, in.id, coherent_gluing(out.lamination, in.lamination), std::nullopt};
    };
    GluingSpec g1{{pair_for(x1, x2, o.name), pair_for(x1, x2, o2.name)}};
    ClosedModel m1 = self_glue(disjoint_union(x1, x2, "Y"), g1, "Y");
    GluingSpec g2{{pair_for(x3, x4, o.name), pair_for(x4, x3, o2.name)}};
    ClosedModel m2 = self_glue(disjoint_union(x3, x4, "Z"), g2, "Z");
    return {m1, m2};
}

namespace detail {

inline std::optional<std::size_t> base_with_word(const TorusLamination& lam, const SignWord& w) {
    for (std::size_t k = 0; k < lam.n_compact(); ++k)
        if (lam.sign_word_from(k) == w) return k;
    return std::nullopt;
}

// One adding-leaf step on entrance torus `tid` of the attracting plug `u`.
inline Plug add_leaf_step(const Plug& u, const std::string& tid, const SignWord& target, int step) {
    const auto& lam = u.torus(tid).lamination;
    std::size_t n = lam.n_compact();
    auto k0 = base_with_word(lam, target.prefix(n));
    if (!k0) throw ModelError("entrance torus " + tid + " lost its enumeration");
    // band before the base along the enumeration
    std::size_t band = lam.leaves[*k0].orientation == Sign::Plus ? (*k0 + n - 1) % n : *k0;
    Rational w(1, std::int64_t(n));
    Rational left = w * std::int64_t(band);
    Rational delta = w / 2;

    std::string wid = u.id + ".w" + std::to_string(step);
    Plug pants = catalog_w_pants(wid);
    Chart src;
    src.positions = {0.0, 1.0 - to_double(delta)};
    const auto& wout = pants.torus(wid + ".out");
    for (Mat2 mat : {Mat2::identity(), Mat2::minus_identity()}) {
        Rational shift = mat.a > 0 ? left + w * Rational(3, 4) : left + w / 4;
        TorusMap m(mat, shift, Rational(0), src, Chart{});
        GluingSpec g{{{wout.id, tid, m, std::nullopt}}};
        Plug glued;
        try {
            glued = glue(pants, u, g, u.id);
        } catch (const PreconditionViolation&) {
            continue;
        }
        const auto& grown = glued.torus(wid + ".in1").lamination;
        if (!base_with_word(grown, target.prefix(n + 1))) continue;

        std::string piece = nontrivial_piece(glued);
        std::string orbit = "z" + std::to_string(step);
        Plug d = da_bifurcation(glued, {{piece, orbit}, DADirection::Attracting, Multipliers::Negative});
        const auto& zr = d.exit.back();
        const auto& in2 = d.torus(wid + ".in2");
        GluingSpec back{{{zr.id, in2.id, coherent_gluing(zr.lamination, in2.lamination), std::nullopt}}};
        ClosedModel closed = self_glue(d, back, u.id);
        if (closed.status != AnosovStatus::Realizable)
            throw ModelError("adding-leaf self-gluing did not certify");
        Plug r = closed.plug;
        std::string merged = nontrivial_piece(r);
        rename_piece(r, merged, u.id + ".A");
        // keep the torus name stable across steps
        for (auto& t : r.entrance)
            if (t.id == wid + ".in1") {
                t.id = tid;
                t.label = u.torus(tid).label;
            }
        r.validate();
        return r;
    }
    throw ModelError("no adding-leaf gluing realizes " + target.prefix(n + 1).str());
}

}  // namespace detail

inline Plug realize_attractor(const std::vector<SignWord>& targets, const std::string& id = "A") {
    if (targets.empty()) throw MalformedInput("realize_attractor needs at least one target");
    Plug u = catalog_anosov_base(id);
    std::vector<std::string> tori;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        std::string orbit = "s" + std::to_string(j);
        u = da_bifurcation(u, {{nontrivial_piece(u), orbit}, DADirection::Repelling, Multipliers::Negative});
        tori.push_back(u.entrance.back().id);
    }
    std::string piece = nontrivial_piece(u);
    rename_piece(u, piece, id + ".A");
    int step = 0;
    for (std::size_t j = 0; j < targets.size(); ++j)
        for (std::size_t len = 1; len < targets[j].size(); ++len)
            u = detail::add_leaf_step(u, tori[j], targets[j], step++);
    // entrance torus j realizes target j
    std::vector<BoundaryTorus> ordered;
    for (const auto& t : tori) ordered.push_back(u.torus(t));
    u.entrance = ordered;
    u.meta.provenance.push_back("attractor realizing entrance types");
    u.validate();
    return u;
}

inline Plug realize_attractor(const SignWord& sigma, const std::string& id = "A") {
    return realize_attractor(std::vector<SignWord>{sigma}, id);
}

// Transverse combinatorial type for a filling lamination. With split bands
// (neighbours oriented alike) the transverse leaves sit at their midpoints;
// an alternating lamination is crossed by a rotated copy of itself.
struct TransversePlan {
    SignWord tau;
    bool split = false;
    std::vector<double> midpoints;
    std::vector<Sign> orientations;
};

inline TransversePlan transverse_type(const TorusLamination& lam) {
    if (!lam.is_filling()) throw PreconditionViolation("transverse type needs a filling lamination");
    TransversePlan plan;
    std::size_t n = lam.n_compact();
    for (std::size_t i = 0; i < n; ++i)
        if (lam.leaves[i].orientation == lam.leaves[(i + 1) % n].orientation) {
            plan.midpoints.push_back((double(i) + 0.5) / double(n));
            plan.orientations.push_back(lam.leaves[i].orientation);
        }
    plan.split = !plan.midpoints.empty();
    if (plan.split)
        plan.tau = TorusLamination::from_orientations(plan.orientations, true).sign_word();
    else
        plan.tau = lam.sign_word();
    return plan;
}

// Map pushing `from` (whose type is plan.tau) strongly transversally onto `to`.
inline std::optional<TorusMap> find_transverse_map(const TorusLamination& from, const TorusLamination& to,
                                                   const TransversePlan& plan) {
    std::size_t n = from.n_compact();
    if (plan.split) {
        if (n != plan.midpoints.size()) throw PreconditionViolation("transverse lamination has the wrong leaf count");
        for (Mat2 mat : {Mat2::identity(), Mat2::minus_identity()})
            for (std::size_t r = 0; r < n; ++r) {
                std::vector<double> q(n);
                bool match = true;
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t j = mat.a > 0 ? (i + n - r) % n : (r + n - i) % n;
                    q[i] = mat.a > 0 ? plan.midpoints[j] : -plan.midpoints[j];
                    Sign pushed = mat.d > 0 ? from.leaves[i].orientation : -from.leaves[i].orientation;
                    match = match && pushed == plan.orientations[j];
                }
                if (!match) continue;
                for (std::size_t i = 1; i < n; ++i)
                    while (q[i] <= q[i - 1]) q[i] += 1.0;
                if (!(q.back() < q[0] + 1.0)) continue;
                // same circles, but drawn inside the window of the other side
                double lift = std::ceil(-q[0]);
                if (lift > 0)
                    for (double& x : q) x += lift;
                Chart src;
                src.positions = q;
                src.steepness = kDefaultSteepness / 4;
                TorusMap m(mat, Rational(0), Rational(0), src, Chart{});
                if (strong_transverse(from, m, to).ok) return m;
            }
        return std::nullopt;
    }
    std::int64_t d = 4 * std::int64_t(std::max(from.n_compact(), to.n_compact()));
    for (Mat2 mat : {Mat2::rotation(), Mat2::rotation().inverse()})
        for (std::int64_t sx : {0, 1, 2})
            for (std::int64_t sy : {0, 1, 2}) {
                TorusMap m(mat, Rational(sx, d), Rational(sy, d));
                if (strong_transverse(from, m, to).ok) return m;
            }
    return std::nullopt;
}

// Caps every boundary torus with a realized repeller or attractor; a saddle
// plug is then blown up to get a transitive flow.
inline ClosedModel embed_in_anosov(const Plug& p) {
    if (!p.all_filling()) throw PreconditionViolation("embedding needs filling laminations on every boundary torus");
    if (p.entrance.empty() && p.exit.empty()) throw PreconditionViolation("plug has no boundary");
    std::vector<TransversePlan> in_plans, out_plans;
    std::vector<SignWord> in_types, out_types;
    for (const auto& t : p.entrance) {
        in_plans.push_back(transverse_type(t.lamination));
        in_types.push_back(in_plans.back().tau);
    }
    for (const auto& t : p.exit) {
        out_plans.push_back(transverse_type(t.lamination));
        out_types.push_back(out_plans.back().tau);
    }
    std::string rid = p.id + ".R", aid = p.id + ".A";
    GluingSpec g;
    std::vector<Plug> caps;
    if (!p.entrance.empty()) {
        Plug r = reverse(realize_attractor(in_types, rid));
        for (std::size_t j = 0; j < p.entrance.size(); ++j) {
            const auto& cap = r.torus(rid + ".N(s" + std::to_string(j) + ")");
            auto m = find_transverse_map(cap.lamination, p.entrance[j].lamination, in_plans[j]);
            if (!m) throw ModelError("no strongly transverse cap for " + p.entrance[j].id);
            g.pairs.push_back({cap.id, p.entrance[j].id, *m, std::nullopt});
        }
        caps.push_back(r);
    }
    if (!p.exit.empty()) {
        Plug a = realize_attractor(out_types, aid);
        for (std::size_t j = 0; j < p.exit.size(); ++j) {
            const auto& cap = a.torus(aid + ".N(s" + std::to_string(j) + ")");
            auto m = find_transverse_map(cap.lamination, p.exit[j].lamination, out_plans[j]);
            if (!m) throw ModelError("no strongly transverse cap for " + p.exit[j].id);
            g.pairs.push_back({p.exit[j].id, cap.id, m->inverse(), std::nullopt});
        }
        caps.push_back(a);
    }
    Plug all = p;
    for (const auto& c : caps) all = disjoint_union(all, c, p.id + "+caps");
    ClosedModel m = self_glue(all, g, p.id + "/embedded");
    if (m.status != AnosovStatus::Direct || !m.closed) throw ModelError("capped plug did not close up");
    if (p.is_saddle_plug() && !caps.empty()) {
        std::string ra = rid + ".A", aa = aid + ".A";
        const BasicPiece* att = m.plug.find_piece(p.exit.empty() ? ra : aa);
        const BasicPiece* rep = m.plug.find_piece(p.entrance.empty() ? aa : ra);
        if (att && rep) {
            ClosedModel t = blow_up_excise_glue(m.plug, {att->id, "e1"}, {rep->id, "e2"}, p.id + "/embedded");
            t.pairs.insert(t.pairs.begin(), m.pairs.begin(), m.pairs.end());
            return t;
        }
    }
    return m;
}

// Leaf i of the result is leaf i + r of the input.
inline TorusLamination rotate_leaves(const TorusLamination& lam, std::size_t r) {
    TorusLamination out = lam;
    std::size_t n = lam.n_compact();
    for (std::size_t i = 0; i < n; ++i) {
        out.leaves[i] = lam.leaves[(i + r) % n];
        out.bands[i] = lam.bands[(i + r) % n];
    }
    return out;
}

// Twisted orbit plug glued onto the entrance of U_M0X0(n): 2n+3 entrance
// leaves, one of them incoherent; rotated so that it is leaf 1.
inline Plug build_m1(int n, const std::string& id = "M1") {
    if (n < 1) throw PreconditionViolation("n must be at least 1");
    Plug v = catalog_v_twisted("V");
    Plug u = catalog_u_m0x0("U", n);
    const auto& in = u.torus("U.in").lamination;
    Rational shift(1, 2 * std::int64_t(in.n_compact()));
    for (Mat2 mat : {Mat2::identity(), Mat2::minus_identity()}) {
        GluingSpec g{{{"V.out", "U.in", TorusMap(mat, shift, Rational(0)), std::nullopt}}};
        Plug m = glue(v, u, g, id);
        auto& lam = m.find_torus("V.in")->lamination;
        if (lam.minority_count() != 1) continue;
        std::size_t special = 0, plus = 0;
        for (const auto& l : lam.leaves) plus += l.orientation == Sign::Plus;
        Sign majority = plus * 2 > lam.n_compact() ? Sign::Plus : Sign::Minus;
        for (std::size_t i = 0; i < lam.n_compact(); ++i)
            if (lam.leaves[i].orientation != majority) special = i;
        lam = rotate_leaves(lam, (special + lam.n_compact() - 1) % lam.n_compact());
        m.meta.jsj_label = "two hyperbolic pieces (copies of M0) and one Seifert piece";
        m.validate();
        return m;
    }
    throw ModelError("no twisted-orbit gluing leaves exactly one incoherent leaf");
}

inline std::vector<ClosedModel> build_n_flows(int n) {
    if (n < 1) throw PreconditionViolation("n must be at least 1");
    Plug m1 = build_m1(n);
    Plug wp = instantiate(m1, "Wp");
    Plug wm = instantiate(reverse(m1), "Wm");
    std::vector<ClosedModel> out;
    for (int k = 1; k <= n; ++k) {
        const auto& a = wp.torus("Wp.U.out").lamination;
        const auto& b = wm.torus("Wm.U.out").lamination;
        TorusMap phi = coherent_gluing(a, b);
        TorusMap pk = phik_gluing(n, k);
        GluingSpec g{{{"Wp.U.out", "Wm.U.out", phi, std::nullopt}, {"Wm.V.in", "Wp.V.in", pk, std::nullopt}}};
        std::string id = "Z" + std::to_string(k);
        ClosedModel m = self_glue(disjoint_union(wp, wm, id), g, id);
        auto [x, y] = annulus_counts(wp.torus("Wp.V.in").lamination, pk, 1);
        m.invariants["annulus_counts"] =
            "{" + std::to_string(std::min(x, y)) + "," + std::to_string(std::max(x, y)) + "}";
        m.invariants["k"] = std::to_string(k);
        m.jsj = "two hyperbolic pieces (copies of M0) and one Seifert piece";
        out.push_back(std::move(m));
    }
    return out;
}

inline std::pair<std::int64_t, std::int64_t> nonequivalence_invariant(const ClosedModel& m) {
    auto it = m.invariants.find("annulus_counts");
    if (it == m.invariants.end()) throw PreconditionViolation("model carries no annulus-count invariant");
    const std::string& s = it->second;
    auto comma = s.find(',');
    return {std::stoll(s.substr(1, comma - 1)), std::stoll(s.substr(comma + 1, s.size() - comma - 2))};
}

// Two section-8 plugs glued so that every pushed leaf meets every entrance
// leaf once.
inline Plug section8_doubled(const std::string& id = "D") {
    Plug u1 = catalog_u_section8(id + "1"), u2 = catalog_u_section8(id + "2");
    GluingSpec g{{{id + "1.out", id + "2.in", TorusMap(Mat2::rotation(), Rational(1, 8), Rational(1, 8)), std::nullopt}}};
    Plug d = glue(u1, u2, g, id);
    for (const auto& row : g.pairs[0].cert->leaf_intersections)
        for (auto c : row)
            if (c != 1) throw ModelError("section-8 gluing should meet every leaf exactly once");
    return d;
}

inline ClosedModel build_infinite_tori_model() {
    Plug d = section8_doubled("D");
    const auto& out = d.torus("D2.out");
    const auto& in = d.torus("D1.in");
    std::optional<TorusMap> chi;
    for (std::int64_t sx : {1, 0, 2})
        for (std::int64_t sy : {1, 0, 2}) {
            if (chi) break;
            TorusMap m(Mat2::rotation(), Rational(sx, 16), Rational(sy, 16));
            if (strong_transverse(out.lamination, m, in.lamination).ok) chi = m;
        }
    if (!chi) throw ModelError("rotation closing map is not strongly transverse");
    GluingSpec g{{{out.id, in.id, *chi, std::nullopt}}};
    ClosedModel m = self_glue(d, g, "Tinf");
    m.invariants["transverse_tori"] = "T_q for q >= 1, class c_x + q c_y, pairwise non-isotopic";
    return m;
}

inline std::int64_t torus_intersection(std::int64_t q, std::int64_t q2) {
    if (q < 1 || q2 < 1) throw PreconditionViolation("torus indices start at 1");
    std::int64_t v = intersection_number({1, q}, {1, q2});
    return v < 0 ? -v : v;
}

}  // namespace anosov
