#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/plug.hpp"

namespace anosov {

struct CatalogParams {
    int n = 1;                     // U_M0X0: entrance has 2n+2 leaves
    std::vector<int> exit_leaves;  // U_M0X0: leaves per exit torus, default one torus
    bool transitive = true;        // anosov_base
    std::string label;             // overrides the manifold label
};

namespace detail {

inline BoundaryTorus make_torus(const std::string& id, Side side, TorusLamination lam, const std::string& label) {
    BoundaryTorus t;
    t.id = id;
    t.side = side;
    t.lamination = std::move(lam);
    t.label = label;
    return t;
}

inline void set_leaf_ids(TorusLamination& lam, const std::string& prefix) {
    for (std::size_t i = 0; i < lam.leaves.size(); ++i) lam.leaves[i].id = prefix + ".g" + std::to_string(i);
}

}  // namespace detail

// One twisted saddle orbit; a single stable leaf on the entrance torus and a
// single unstable leaf on the exit torus, each torus one annular gap.
inline Plug catalog_v_twisted(const std::string& id) {
    Plug p;
    p.id = id;
    p.pieces.push_back({"O", PieceKind::SaddlePeriodicOrbit, true, Multipliers::Negative});
    auto in = TorusLamination::from_orientations({dynamical_to_contracting(Side::Entrance, Sign::Plus)}, false, "O");
    auto out = TorusLamination::from_orientations({dynamical_to_contracting(Side::Exit, Sign::Plus)}, false, "O");
    in.dense_owners.clear();
    out.dense_owners.clear();
    detail::set_leaf_ids(in, "in");
    detail::set_leaf_ids(out, "out");
    p.entrance.push_back(detail::make_torus("in", Side::Entrance, in, "dV_in"));
    p.exit.push_back(detail::make_torus("out", Side::Exit, out, "dV_out"));
    p.gaps.push_back({"in", 0, "out", 0, false});
    p.meta.jsj_label = "seifert(twisted orbit)";
    p.meta.manifold_pieces = {"V_twisted"};
    return instantiate(p, id);
}

// Pair of pants times a circle: two entrance tori with one leaf each, one exit
// torus with two coherent leaves.
inline Plug catalog_w_pants(const std::string& id) {
    Plug p;
    p.id = id;
    p.pieces.push_back({"O", PieceKind::SaddlePeriodicOrbit, true, Multipliers::Positive});
    Sign s_in = dynamical_to_contracting(Side::Entrance, Sign::Plus);
    Sign s_out = dynamical_to_contracting(Side::Exit, Sign::Plus);
    for (int j = 1; j <= 2; ++j) {
        auto in = TorusLamination::from_orientations({s_in}, false, "O");
        in.dense_owners.clear();
        detail::set_leaf_ids(in, "in" + std::to_string(j));
        p.entrance.push_back(detail::make_torus("in" + std::to_string(j), Side::Entrance, in,
                                                "dW_in" + std::to_string(j)));
    }
    auto out = TorusLamination::from_orientations({s_out, s_out}, false, "O");
    out.dense_owners.clear();
    detail::set_leaf_ids(out, "out");
    p.exit.push_back(detail::make_torus("out", Side::Exit, out, "dW_out"));
    p.gaps.push_back({"in1", 0, "out", 0, false});
    p.gaps.push_back({"in2", 0, "out", 1, false});
    p.meta.jsj_label = "seifert(pants x S1)";
    p.meta.manifold_pieces = {"W_pants"};
    return instantiate(p, id);
}

// Two saddles on T^2 x S^1 minus the source and sink discs. Leaf owners and
// the gap permutation follow the quadrant picture of the base field: the
// entrance circle is run counterclockwise, the exit circle clockwise.
inline Plug catalog_u_section8(const std::string& id) {
    Plug p;
    p.id = id;
    p.pieces.push_back({"s1", PieceKind::SaddlePeriodicOrbit, true, Multipliers::Positive});
    p.pieces.push_back({"s2", PieceKind::SaddlePeriodicOrbit, true, Multipliers::Positive});
    // drift is upward near s1 and downward near s2
    auto dyn = [](const std::string& s) { return s == "s1" ? Sign::Plus : Sign::Minus; };
    std::vector<std::string> in_owner = {"s1", "s2", "s1", "s2"};
    std::vector<std::string> out_owner = {"s2", "s1", "s2", "s1"};
    TorusLamination in, out;
    for (std::size_t i = 0; i < 4; ++i) {
        in.leaves.push_back({dynamical_to_contracting(Side::Entrance, dyn(in_owner[i])), in_owner[i], ""});
        out.leaves.push_back({dynamical_to_contracting(Side::Exit, dyn(out_owner[i])), out_owner[i], ""});
    }
    in.bands.assign(4, Band{false, {}});
    out.bands.assign(4, Band{false, {}});
    detail::set_leaf_ids(in, "in");
    detail::set_leaf_ids(out, "out");
    p.entrance.push_back(detail::make_torus("in", Side::Entrance, in, "dD_alpha"));
    p.exit.push_back(detail::make_torus("out", Side::Exit, out, "dD_omega"));
    p.gaps = {{"in", 0, "out", 1, false}, {"in", 1, "out", 0, false}, {"in", 2, "out", 3, false},
              {"in", 3, "out", 2, false}};
    p.meta.jsj_label = "seifert(T2 x S1 minus discs)";
    p.meta.manifold_pieces = {"U_section8"};
    return instantiate(p, id);
}

inline Plug catalog_u_m0x0(const std::string& id, int n, std::vector<int> exit_leaves = {}) {
    if (n < 1) throw MalformedInput("U_M0X0 needs n >= 1");
    if (exit_leaves.empty()) exit_leaves = {2 * n + 2};
    for (int c : exit_leaves)
        if (c < 1) throw MalformedInput("U_M0X0 exit tori need at least one leaf each");
    Plug p;
    p.id = id;
    BasicPiece lam{"L", PieceKind::SaddleNontrivial, true, Multipliers::NotApplicable};
    lam.positive_orbits = true;
    lam.negative_orbits = true;
    p.pieces.push_back(lam);
    p.connections.insert({"L", "L"});
    auto in = TorusLamination::from_orientations(std::vector<Sign>(std::size_t(2 * n + 2), Sign::Plus), true, "L");
    detail::set_leaf_ids(in, "in");
    p.entrance.push_back(detail::make_torus("in", Side::Entrance, in, "dM0_in"));
    for (std::size_t j = 0; j < exit_leaves.size(); ++j) {
        auto out = TorusLamination::from_orientations(std::vector<Sign>(std::size_t(exit_leaves[j]), Sign::Plus), true, "L");
        std::string tid = exit_leaves.size() == 1 ? "out" : "out" + std::to_string(j + 1);
        detail::set_leaf_ids(out, tid);
        p.exit.push_back(detail::make_torus(tid, Side::Exit, out, "dM0_" + tid));
    }
    p.meta.interior_hyperbolic = true;
    p.meta.jsj_label = "hyperbolic";
    p.meta.manifold_pieces = {"M0X0(" + std::to_string(n) + ")"};
    return instantiate(p, id);
}

// Closed manifold carrying an Anosov flow, used as the input of DA surgery.
inline Plug catalog_anosov_base(const std::string& id, bool transitive = true, const std::string& label = "M") {
    Plug p;
    p.id = id;
    BasicPiece m{"X", PieceKind::Anosov, transitive, Multipliers::NotApplicable};
    m.positive_orbits = true;
    m.negative_orbits = true;
    m.infinitely_many_negative = true;
    p.pieces.push_back(m);
    if (transitive) p.connections.insert({"X", "X"});
    p.meta.jsj_label = label;
    p.meta.manifold_pieces = {label};
    return instantiate(p, id);
}

inline Plug catalog(const std::string& kind, const std::string& id, const CatalogParams& params = {}) {
    Plug p;
    if (kind == "V_twisted")
        p = catalog_v_twisted(id);
    else if (kind == "W_pants")
        p = catalog_w_pants(id);
    else if (kind == "U_section8")
        p = catalog_u_section8(id);
    else if (kind == "U_M0X0")
        p = catalog_u_m0x0(id, params.n, params.exit_leaves);
    else if (kind == "anosov_base")
        p = catalog_anosov_base(id, params.transitive, params.label.empty() ? "M" : params.label);
    else
        throw MalformedInput("unknown catalog kind " + kind);
    p.validate();
    return p;
}

}  // namespace anosov
