#pragma once

#include <utility>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/lamination.hpp"
#include "anosov/torus_map.hpp"
#include "anosov/transversality.hpp"

namespace anosov {

// Half-band shift between two coherent laminations with the same leaf count.
// Matrix is Id when the absolute orientations agree, -Id otherwise, so that
// pushed compact leaves keep pointing the way the receiving ones do.
inline TorusMap coherent_gluing(const TorusLamination& l1, const TorusLamination& l2) {
    std::size_t n = l1.n_compact();
    if (n == 0 || n != l2.n_compact())
        throw PreconditionViolation("coherent_gluing needs equal nonzero leaf counts");
    if (!l1.is_filling() || !l2.is_filling())
        throw PreconditionViolation("coherent_gluing needs filling laminations");
    if (!l1.sign_word().coherent() || !l2.sign_word().coherent())
        throw PreconditionViolation("coherent_gluing needs coherently oriented leaves");
    bool same = l1.leaves[0].orientation == l2.leaves[0].orientation;
    TorusMap m(same ? Mat2::identity() : Mat2::minus_identity(), Rational(1, 2 * std::int64_t(n)), Rational(0));
    auto cert = strong_transverse(l1, m, l2);
    if (!cert.ok) throw ModelError("coherent_gluing produced a non strongly transverse map: " + cert.failure);
    return m;
}

// Lamination on the entrance torus of the twisted-orbit prefoliation plug:
// 2n+3 leaves, all pointing up except the special one at index 1.
inline TorusLamination special_leaf_lamination(int n, const std::string& owner = "",
                                               const std::string& special_owner = "") {
    if (n < 1) throw PreconditionViolation("n must be at least 1");
    std::vector<Sign> o(std::size_t(2 * n + 3), Sign::Plus);
    o[1] = Sign::Minus;
    auto lam = TorusLamination::from_orientations(o, true, owner);
    if (!special_owner.empty()) lam.leaves[1].owner = special_owner;
    return lam;
}

// Chart squeezing leaves 0, 1, 2 into [0, eps]; the other 2n gaps and the
// wrap-around gap share the rest evenly.
inline Chart squeeze_chart(int n) {
    std::int64_t big = 2 * n + 1;
    Rational eps(1, 8 * (2 * std::int64_t(n) + 3));
    Rational u = (Rational(1) - eps) / big;
    Chart c;
    c.positions = {0.0, to_double(eps / 2), to_double(eps)};
    for (int i = 3; i < 2 * n + 3; ++i) c.positions.push_back(to_double(eps + u * std::int64_t(i - 2)));
    return c;
}

inline Rational squeeze_shift(int n, int k) {
    std::int64_t big = 2 * n + 1;
    Rational eps(1, 8 * (2 * std::int64_t(n) + 3));
    Rational u = (Rational(1) - eps) / big;
    return u * Rational(2 * k - 1, 2);
}

inline TorusMap phik_gluing(int n, int k) {
    if (n < 1) throw PreconditionViolation("n must be at least 1");
    if (k < 1 || k > n) throw PreconditionViolation("k must lie in 1..n");
    Chart c = squeeze_chart(n);
    return TorusMap(Mat2::identity(), squeeze_shift(n, k), Rational(0), c, c);
}

// Leaves of `lam` strictly between its special leaf and the pushed special
// leaf, going up in x, and the remaining non-special ones.
inline std::pair<std::size_t, std::size_t> annulus_counts(const TorusLamination& lam, const TorusMap& m,
                                                          std::size_t special) {
    auto pos = m.target.resolve(lam.n_compact());
    auto src = m.source.resolve(lam.n_compact());
    if (!m.preserves_vertical()) throw PreconditionViolation("annulus counts need vertical leaves to stay vertical");
    double a = pos[special];
    double b = double(m.matrix.a) * src[special] + to_double(m.sx);
    double span = frac(b - a);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < lam.n_compact(); ++i) {
        if (i == special) continue;
        double d = frac(pos[i] - a);
        if (d > 0 && d < span) ++inside;
    }
    return {inside, lam.n_compact() - 1 - inside};
}

}  // namespace anosov
