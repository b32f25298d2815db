#include <gtest/gtest.h>

#include "anosov/catalog.hpp"
#include "anosov/gluing.hpp"
#include "anosov/gluing_maps.hpp"
#include "anosov/transversality.hpp"

using namespace anosov;

TEST(TorusMap, RejectsNonUnimodular) {
    EXPECT_THROW(TorusMap(Mat2{2, 0, 0, 1}, Rational(0), Rational(0)), PreconditionViolation);
    EXPECT_THROW(TorusMap(Mat2{0, 1, 1, 0}, Rational(0), Rational(0)), PreconditionViolation);
}

TEST(TorusMap, InverseUndoesMap) {
    TorusMap m(Mat2{2, 1, 1, 1}, Rational(1, 3), Rational(-1, 5));
    TorusMap inv = m.inverse();
    Vec2 p{0.3, 0.7};
    Vec2 q = inv.apply(m.apply(p));
    EXPECT_NEAR(q.x, p.x, 1e-12);
    EXPECT_NEAR(q.y, p.y, 1e-12);
    EXPECT_EQ(inv.matrix * m.matrix, Mat2::identity());
}

TEST(Transversality, IdentityWithoutShiftIsNotTransverse) {
    auto lam = TorusLamination::from_orientations({Sign::Plus, Sign::Plus}, true);
    auto c = strong_transverse(lam, TorusMap(Mat2::identity(), Rational(0), Rational(0)), lam);
    EXPECT_FALSE(c.ok);
    EXPECT_FALSE(c.failure.empty());
}

TEST(Transversality, RotationCrossesEveryLeafOnce) {
    auto lam = TorusLamination::from_orientations({Sign::Plus, Sign::Minus}, true);
    auto c = strong_transverse(lam, TorusMap(Mat2::rotation(), Rational(1, 8), Rational(1, 8)), lam);
    ASSERT_TRUE(c.ok) << c.failure;
    for (const auto& row : c.leaf_intersections)
        for (auto x : row) EXPECT_EQ(x, 1u);
}

TEST(Catalog, KindsValidateAndHaveExpectedBoundaries) {
    for (const char* k : {"V_twisted", "W_pants", "U_section8", "U_M0X0", "anosov_base"}) {
        Plug p = catalog(k, "P");
        EXPECT_NO_THROW(p.validate()) << k;
    }
    Plug v = catalog_v_twisted("V");
    EXPECT_EQ(v.torus("V.in").lamination.n_compact(), 1u);
    EXPECT_EQ(v.torus("V.in").lamination.annular_gaps(), 1u);
    Plug u = catalog_u_section8("U");
    const auto& in = u.torus("U.in").lamination;
    ASSERT_EQ(in.n_compact(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NE(in.leaves[i].owner, in.leaves[(i + 1) % 4].owner);
    EXPECT_EQ(u.gaps.size(), 4u);
    for (int n = 1; n <= 4; ++n)
        EXPECT_EQ(catalog_u_m0x0("M", n).torus("M.in").lamination.n_compact(), std::size_t(2 * n + 2));
    EXPECT_THROW(catalog("nope", "P"), MalformedInput);
    EXPECT_THROW(catalog_u_m0x0("M", 0), MalformedInput);
}

TEST(Plug, ReverseSwapsSidesAndKinds) {
    Plug a = catalog_anosov_base("M");
    Plug w = catalog_w_pants("W");
    Plug r = reverse(w);
    EXPECT_EQ(r.entrance.size(), w.exit.size());
    EXPECT_EQ(r.exit.size(), w.entrance.size());
    EXPECT_NO_THROW(r.validate());
    EXPECT_TRUE(reverse(a).entrance.empty());
}

TEST(Plug, DisjointUnionRejectsSharedIds) {
    Plug a = catalog_w_pants("W");
    EXPECT_THROW(disjoint_union(a, a, "WW"), ModelError);
    Plug b = instantiate(a, "W2");
    Plug u = disjoint_union(a, b, "WW");
    EXPECT_EQ(u.parts.size(), 2u);
    EXPECT_EQ(u.entrance.size(), 4u);
}

TEST(GluingMaps, CoherentGluingPicksSignAndShift) {
    auto up = TorusLamination::from_orientations({Sign::Plus, Sign::Plus, Sign::Plus}, true);
    auto down = TorusLamination::from_orientations({Sign::Minus, Sign::Minus, Sign::Minus}, true);
    TorusMap same = coherent_gluing(up, up);
    TorusMap opp = coherent_gluing(up, down);
    EXPECT_EQ(same.matrix, Mat2::identity());
    EXPECT_EQ(opp.matrix, Mat2::minus_identity());
    EXPECT_EQ(same.sx, Rational(1, 6));
    auto mixed = TorusLamination::from_orientations({Sign::Plus, Sign::Minus}, true);
    EXPECT_THROW(coherent_gluing(mixed, mixed), PreconditionViolation);
}

// Leaves strictly between the special leaf and its image, counted straight
// from the squeezed chart coordinates.
static std::size_t brute_inside(int n, int k) {
    double eps = 1.0 / (8 * (2 * n + 3));
    double u = (1 - eps) / (2 * n + 1);
    std::vector<double> pos = {0, eps / 2, eps};
    for (int i = 3; i < 2 * n + 3; ++i) pos.push_back(eps + (i - 2) * u);
    double image = eps / 2 + u * (2 * k - 1) / 2;
    std::size_t c = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        if (i != 1 && pos[i] > eps / 2 && pos[i] < image) ++c;
    return c;
}

TEST(GluingMaps, AnnulusCountsMatchChartCount) {
    for (int n = 1; n <= 6; ++n)
        for (int k = 1; k <= n; ++k) {
            auto lam = special_leaf_lamination(n);
            auto [a, b] = annulus_counts(lam, phik_gluing(n, k), 1);
            EXPECT_EQ(a, brute_inside(n, k));
            EXPECT_EQ(a, std::size_t(k));
            EXPECT_EQ(b, std::size_t(2 * n + 2 - k));
        }
    EXPECT_THROW(phik_gluing(2, 3), PreconditionViolation);
}

TEST(Glue, TwistedOrbitOntoM0X0) {
    Plug v = catalog_v_twisted("V");
    Plug u = catalog_u_m0x0("U", 2);
    GluingSpec g{{{"V.out", "U.in", TorusMap(Mat2::identity(), Rational(1, 12), Rational(0)), std::nullopt}}};
    Plug m = glue(v, u, g, "M");
    ASSERT_TRUE(g.pairs[0].cert.has_value());
    EXPECT_TRUE(g.pairs[0].cert->ok);
    const auto& lam = m.torus("V.in").lamination;
    EXPECT_EQ(lam.n_compact(), 7u);
    EXPECT_TRUE(lam.is_filling());
    EXPECT_EQ(m.meta.glue_history.size(), 1u);
}

TEST(Glue, RejectsNonTransversePair) {
    Plug a = catalog_w_pants("A");
    Plug b = catalog_w_pants("B");
    GluingSpec g{{{"A.out", "B.in1", TorusMap(Mat2::identity(), Rational(0), Rational(0)), std::nullopt}}};
    EXPECT_ANY_THROW(glue(a, b, g));
    GluingSpec empty;
    EXPECT_THROW(glue(a, b, empty), MalformedInput);
}

TEST(SelfGlue, NeedsPairs) {
    Plug a = catalog_u_m0x0("U", 1);
    GluingSpec empty;
    EXPECT_THROW(self_glue(a, empty), MalformedInput);
}

TEST(SelfGlue, ClosingM0X0OnItselfIsRealizable) {
    Plug u = catalog_u_m0x0("U", 1);
    const auto& out = u.torus("U.out").lamination;
    const auto& in = u.torus("U.in").lamination;
    GluingSpec g{{{"U.out", "U.in", coherent_gluing(out, in), std::nullopt}}};
    ClosedModel m = self_glue(u, g, "C");
    EXPECT_TRUE(m.closed);
    EXPECT_EQ(m.status, AnosovStatus::Realizable);
    EXPECT_TRUE(m.transitive);
}
