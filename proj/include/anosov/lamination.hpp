#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/rational.hpp"
#include "anosov/sign_word.hpp"

namespace anosov {

struct CompactLeaf {
    Sign orientation = Sign::Plus;  // contracting orientation, + = up
    std::string owner;              // basic piece whose manifold traces this leaf
    std::string id;
};

// Gap between leaf i and leaf i+1 (cyclically). A filled band is a strip
// foliated by non-compact leaves; an empty one is an annular gap.
struct Band {
    bool filled = true;
    std::set<std::string> owners;
};

// MS-lamination on one boundary torus, stored in normal-form coordinates:
// leaf i is the vertical circle x = i/n, listed in increasing x.
struct TorusLamination {
    std::vector<CompactLeaf> leaves;
    std::vector<Band> bands;
    std::array<std::int64_t, 2> leaf_class{0, 1};
    bool is_foliation = false;
    std::set<std::string> dense_owners;

    std::size_t n_compact() const { return leaves.size(); }

    Rational position(std::size_t i) const { return Rational(std::int64_t(i), std::int64_t(leaves.size())); }

    bool is_filling() const {
        if (leaves.empty()) return false;
        for (const auto& b : bands)
            if (!b.filled) return false;
        return true;
    }

    std::size_t annular_gaps() const {
        std::size_t c = 0;
        for (const auto& b : bands) c += !b.filled;
        return c;
    }

    std::vector<Sign> orientations() const {
        std::vector<Sign> o;
        for (const auto& l : leaves) o.push_back(l.orientation);
        return o;
    }

    // Geometric enumeration from leaf k: walk to the right of its contracting
    // orientation, i.e. increasing x when the leaf points up.
    std::vector<std::size_t> enumeration_from(std::size_t k) const {
        std::size_t n = leaves.size();
        std::vector<std::size_t> idx(n);
        bool fwd = leaves[k].orientation == Sign::Plus;
        for (std::size_t i = 0; i < n; ++i) idx[i] = fwd ? (k + i) % n : (k + n - i) % n;
        return idx;
    }

    // Leaves oriented against the majority.
    std::size_t minority_count() const {
        std::size_t plus = 0;
        for (const auto& l : leaves) plus += l.orientation == Sign::Plus;
        return std::min(plus, leaves.size() - plus);
    }

    SignWord sign_word_from(std::size_t k) const {
        auto idx = enumeration_from(k);
        std::vector<Sign> w;
        for (std::size_t j : idx) w.push_back(leaves[j].orientation * leaves[k].orientation);
        return SignWord(std::move(w));
    }

    SignWord sign_word() const {
        if (leaves.empty()) throw Unsupported("lamination has no compact leaf");
        return sign_word_from(0);
    }

    CombinatorialType type() const { return canonical_type(sign_word()); }

    BandProfile profile(std::size_t i) const {
        std::size_t n = leaves.size();
        return band_profile(leaves[i].orientation, leaves[(i + 1) % n].orientation);
    }

    std::set<std::string> owners_of_band(std::size_t i) const {
        if (!bands[i].owners.empty()) return bands[i].owners;
        return dense_owners;
    }

    void check() const {
        if (bands.size() != leaves.size())
            throw ModelError("lamination band count differs from leaf count");
        if (is_foliation && !is_filling())
            throw ModelError("a foliation cannot have annular gaps");
    }

    // Absolute orientations, all gaps filled or all empty.
    static TorusLamination from_orientations(const std::vector<Sign>& o, bool filled,
                                             const std::string& owner = "",
                                             const std::string& id_prefix = "g") {
        TorusLamination lam;
        for (std::size_t i = 0; i < o.size(); ++i)
            lam.leaves.push_back({o[i], owner, id_prefix + std::to_string(i)});
        lam.bands.assign(o.size(), Band{filled, {}});
        if (!owner.empty()) lam.dense_owners.insert(owner);
        return lam;
    }

    static TorusLamination from_word(const SignWord& w, bool filled, const std::string& owner = "",
                                     const std::string& id_prefix = "g") {
        return from_orientations(w.signs(), filled, owner, id_prefix);
    }
};

inline TorusLamination zipped_reeb(bool foliation = false, const std::string& owner = "") {
    auto lam = TorusLamination::from_word(SignWord::parse("+"), true, owner);
    lam.is_foliation = foliation;
    return lam;
}

// New leaf appended after the last one of an enumeration realizing the
// current word, with sign s relative to the base leaf.
inline TorusLamination add_compact_leaf(const TorusLamination& f, Sign s) {
    if (f.n_compact() == 0 || !f.is_filling())
        throw PreconditionViolation("add_compact_leaf needs a filling lamination with a compact leaf");
    auto idx = f.enumeration_from(0);
    SignWord w = f.sign_word().appended(s);
    TorusLamination out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        CompactLeaf l = f.leaves[idx[i]];
        l.orientation = w[i];
        out.leaves.push_back(l);
    }
    out.leaves.push_back({s, "", "added" + std::to_string(f.n_compact())});
    std::set<std::string> owners = f.dense_owners;
    out.bands.assign(out.leaves.size(), Band{true, {}});
    out.dense_owners = owners;
    out.leaf_class = f.leaf_class;
    out.is_foliation = f.is_foliation;
    return out;
}

inline std::string profiles_string(const TorusLamination& lam) {
    std::string s;
    for (std::size_t i = 0; i < lam.n_compact(); ++i) {
        if (i) s += ",";
        s += lam.bands[i].filled ? to_string(lam.profile(i)) : "empty";
    }
    return s;
}

}  // namespace anosov
