#include <gtest/gtest.h>

#include "anosov/catalog.hpp"
#include "anosov/surgery.hpp"
#include "oracles.hpp"

using namespace anosov;

namespace {

DASpec spec(DADirection d, Multipliers m) { return {{"M.X", "O"}, d, m}; }

}  // namespace

TEST(DA, AttractingPositiveAddsExitTorusWithTwoLeaves) {
    Plug q = da_bifurcation(catalog_anosov_base("M"), spec(DADirection::Attracting, Multipliers::Positive));
    ASSERT_EQ(q.exit.size(), 1u);
    EXPECT_TRUE(q.entrance.empty());
    const auto& lam = q.torus("M.N(O)").lamination;
    EXPECT_EQ(lam.n_compact(), 2u);
    EXPECT_TRUE(lam.sign_word().coherent());
    ASSERT_EQ(q.pieces.size(), 1u);
    EXPECT_EQ(q.pieces[0].kind, PieceKind::RepellerNontrivial);
    EXPECT_EQ(q.meta.manifold_pieces[0], "M\\N(O)");
}

TEST(DA, RepellingNegativeAddsOneEntranceLeaf) {
    Plug q = da_bifurcation(catalog_anosov_base("M"), spec(DADirection::Repelling, Multipliers::Negative));
    ASSERT_EQ(q.entrance.size(), 1u);
    EXPECT_EQ(q.torus("M.N(O)").lamination.n_compact(), 1u);
    EXPECT_EQ(q.pieces[0].kind, PieceKind::AttractorNontrivial);
}

TEST(DA, Preconditions) {
    Plug base = catalog_anosov_base("M");
    auto s = spec(DADirection::Attracting, Multipliers::Positive);
    s.free_separatrix = true;
    EXPECT_THROW(da_bifurcation(base, s), PreconditionViolation);
    s = spec(DADirection::Attracting, Multipliers::Negative);
    s.requested_leaves = 2;
    EXPECT_THROW(da_bifurcation(base, s), PreconditionViolation);
    s = spec(DADirection::Attracting, Multipliers::Positive);
    s.requested_leaves = 1;
    EXPECT_THROW(da_bifurcation(base, s), PreconditionViolation);
    s = spec(DADirection::Attracting, Multipliers::NotApplicable);
    EXPECT_THROW(da_bifurcation(base, s), MalformedInput);
    s = spec(DADirection::Attracting, Multipliers::Positive);
    s.orbit.piece = "M.nope";
    EXPECT_THROW(da_bifurcation(base, s), MalformedInput);

    Plug once = da_bifurcation(base, spec(DADirection::Attracting, Multipliers::Positive));
    EXPECT_THROW(da_bifurcation(once, {{"M.X'", "O"}, DADirection::Repelling, Multipliers::Positive}),
                 PreconditionViolation);

    Plug v = catalog_v_twisted("V");
    EXPECT_THROW(da_bifurcation(v, {{v.pieces[0].id, "O"}, DADirection::Attracting, Multipliers::Positive}),
                 PreconditionViolation);
}

TEST(DA, SecondSurgeryOnNewOrbit) {
    Plug q = da_bifurcation(catalog_anosov_base("M"), spec(DADirection::Attracting, Multipliers::Positive));
    q = da_bifurcation(q, {{"M.X'", "O2"}, DADirection::Repelling, Multipliers::Positive});
    EXPECT_EQ(q.exit.size(), 1u);
    EXPECT_EQ(q.entrance.size(), 1u);
    EXPECT_EQ(q.pieces[0].kind, PieceKind::SaddleNontrivial);
    EXPECT_EQ(q.meta.manifold_pieces[0], "M\\N(O,O2)");
}

TEST(Attractor, RealizesEveryCanonicalWord) {
    for (std::size_t n = 1; n <= 6; ++n)
        for (const auto& w : canonical_words(n)) {
            Plug a = realize_attractor(w);
            ASSERT_TRUE(a.is_attracting()) << w.str();
            ASSERT_EQ(a.entrance.size(), 1u);
            EXPECT_TRUE(oracle::types_equivalent(a.entrance[0].lamination.sign_word(), w)) << w.str();
            EXPECT_TRUE(a.entrance[0].lamination.is_filling());
        }
}

TEST(Attractor, SeveralToriKeepTargetOrder) {
    std::vector<SignWord> ws = {SignWord::parse("+-+"), SignWord::parse("++"), SignWord::parse("+")};
    Plug a = realize_attractor(ws);
    ASSERT_EQ(a.entrance.size(), ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i)
        EXPECT_TRUE(oracle::types_equivalent(a.entrance[i].lamination.sign_word(), ws[i])) << i;
}

TEST(Surgery, BothFlowsShareManifold) {
    auto [a, b] = build_both_flows();
    EXPECT_FALSE(a.transitive);
    EXPECT_TRUE(b.transitive);
    EXPECT_EQ(a.descriptor(), b.descriptor());
    EXPECT_TRUE(a.closed);
    EXPECT_TRUE(b.closed);
}

TEST(Surgery, RicherDynamicsNeedsDistinctOrbits) {
    Plug base = catalog_anosov_base("M");
    EXPECT_THROW(blow_up_excise_glue(base, {"M.X", "O"}, {"M.X", "O"}), PreconditionViolation);
    ClosedModel m = blow_up_excise_glue(base, {"M.X", "O"}, {"M.X", "O2"});
    EXPECT_TRUE(m.closed);
    EXPECT_NE(m.status, AnosovStatus::NotCertified);
}

TEST(Surgery, M1EntranceHasOneIncoherentLeafAtIndexOne) {
    for (int n = 1; n <= 5; ++n) {
        Plug m = build_m1(n);
        const auto& lam = m.torus("V.in").lamination;
        ASSERT_EQ(lam.n_compact(), std::size_t(2 * n + 3));
        EXPECT_EQ(lam.minority_count(), 1u);
        Sign s1 = lam.leaves[1].orientation;
        for (std::size_t i = 0; i < lam.n_compact(); ++i)
            if (i != 1) {
                EXPECT_NE(lam.leaves[i].orientation, s1) << n << " " << i;
            }
    }
    EXPECT_THROW(build_m1(0), PreconditionViolation);
}

TEST(Surgery, NFlowsInvariants) {
    auto ms = build_n_flows(3);
    ASSERT_EQ(ms.size(), 3u);
    std::vector<std::pair<std::int64_t, std::int64_t>> want = {{1, 7}, {2, 6}, {3, 5}};
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(nonequivalence_invariant(ms[k]), want[k]);
        EXPECT_TRUE(ms[k].transitive);
        EXPECT_EQ(ms[k].descriptor().pieces, ms[0].descriptor().pieces);
    }
    ClosedModel bare;
    EXPECT_THROW(nonequivalence_invariant(bare), PreconditionViolation);
}

TEST(Surgery, EmbedPlugsInClosedModels) {
    std::vector<Plug> plugs = {section8_doubled("D"), catalog_u_m0x0("U", 2)};
    for (const auto& p : plugs) {
        ClosedModel m = embed_in_anosov(p);
        EXPECT_TRUE(m.closed) << p.id;
        EXPECT_TRUE(m.plug.entrance.empty() && m.plug.exit.empty()) << p.id;
        EXPECT_NE(m.status, AnosovStatus::NotCertified) << p.id;
    }
    EXPECT_THROW(embed_in_anosov(catalog_w_pants("W")), PreconditionViolation);
    EXPECT_THROW(embed_in_anosov(catalog_anosov_base("M")), PreconditionViolation);
}

TEST(Surgery, Section8DoubledMeetsEveryLeafOnce) {
    Plug d = section8_doubled();
    EXPECT_EQ(d.entrance.size(), 1u);
    EXPECT_EQ(d.exit.size(), 1u);
    ClosedModel m = build_infinite_tori_model();
    EXPECT_TRUE(m.closed);
    EXPECT_TRUE(m.invariants.count("transverse_tori"));
}

TEST(Surgery, TorusIntersections) {
    for (int q = 1; q <= 8; ++q)
        for (int q2 = 1; q2 <= 8; ++q2) EXPECT_EQ(torus_intersection(q, q2), std::abs(q - q2));
    EXPECT_THROW(torus_intersection(0, 3), PreconditionViolation);
}
