#include <gtest/gtest.h>

#include "anosov/catalog.hpp"
#include "anosov/numeric.hpp"

using namespace anosov;
using namespace anosov::numeric;

namespace {

LocalDAField da(bool active) {
    LocalDAField f;
    f.lambda = -1.5;
    f.mu = 0.75;
    f.eta = 0.4;
    f.active = active;
    return f;
}

Planar planar(const LocalDAField& f) {
    return [f](const Eigen::Vector2d& x) { return f.transverse(x); };
}

Planar planar(const Section8Field& f) {
    return [f](const Eigen::Vector2d& x) { return f.base(x); };
}

}  // namespace

TEST(LocalDA, OriginMultipliers) {
    for (bool active : {false, true}) {
        auto f = da(active);
        auto e = equilibrium_multipliers(planar(f), {0, 0});
        EXPECT_NEAR(e[0].real(), f.lambda, 1e-6);
        // the perturbation flips the expanding direction at the origin
        EXPECT_NEAR(e[1].real(), active ? -f.mu : f.mu, 1e-6);
        EXPECT_NEAR(e[0].imag(), 0, 1e-9);
    }
}

TEST(LocalDA, NewSaddlesSitAtDelta) {
    auto f = da(true);
    double u = da_saddle_ordinate(f);
    EXPECT_NEAR(u, da_delta(), 1e-9);
    // (1 - u^2)^2 = 1/2 at the saddle ordinate
    EXPECT_NEAR((1 - u * u) * (1 - u * u), 0.5, 1e-9);
    for (double sgn : {1.0, -1.0}) {
        auto e = equilibrium_multipliers(planar(f), {0, sgn * f.eta * u});
        EXPECT_NEAR(e[0].real(), f.lambda, 1e-5);
        EXPECT_NEAR(e[1].real(), 8 * f.mu * u * u * (1 - u * u), 1e-5);
    }
    EXPECT_THROW(da_saddle_ordinate(da(false)), PreconditionViolation);
}

TEST(LocalDA, NonEquilibriumRejected) {
    EXPECT_THROW(equilibrium_multipliers(planar(da(true)), {0.1, 0.1}), PreconditionViolation);
}

TEST(LocalDA, ParameterChecks) {
    auto f = da(true);
    f.lambda = 1;
    EXPECT_THROW(f.check(), PreconditionViolation);
    f = da(true);
    f.eta = 1.5;
    EXPECT_THROW(f.check(), PreconditionViolation);
}

TEST(LocalDA, StableAxisStaysInvariant) {
    auto f = da(true);
    Field fld = [&](const State& s) { return f(s); };
    auto tr = integrate(fld, {0.9, 0, 0}, 3.0, 1e-2);
    for (const auto& s : tr.states) ASSERT_EQ(s[1], 0.0);
    EXPECT_NEAR(tr.states.back()[0], 0.9 * std::exp(f.lambda * 3.0), 1e-8);
}

TEST(LocalDA, RK4IsFourthOrder) {
    double p = rk4_empirical_order(da(true), {0.5, 0.01, 0}, 2.0, 0.1);
    EXPECT_GT(p, 3.8);
    EXPECT_LT(p, 4.2);
}

TEST(Integrate, LeavingDomainThrows) {
    auto f = da(false);
    Field fld = [&](const State& s) { return f(s); };
    IntegrateOptions o;
    o.in_domain = [&](const State& s) { return f.in_domain(s); };
    try {
        integrate(fld, {0.5, 0.5, 0}, 5.0, 1e-2, o);
        FAIL() << "no escape";
    } catch (const EscapeError& e) {
        EXPECT_GT(std::fabs(e.last()[1]), 1.0);
    }
}

TEST(Integrate, EventIsLocatedByBisection) {
    Field fld = [](const State&) { return State{1, 0, 0}; };
    IntegrateOptions o;
    o.event = [](const State& s) { return 0.3337 - s[0]; };
    auto tr = integrate(fld, {0, 0, 0}, 1.0, 0.01, o);
    ASSERT_TRUE(tr.event);
    EXPECT_NEAR(tr.event_time, 0.3337, 1e-9);
}

TEST(Section8, EquilibriumTypes) {
    Section8Field f;
    auto p = planar(f);
    double tp = 2 * kPi;
    auto a = equilibrium_multipliers(p, Section8Field::alpha());
    auto w = equilibrium_multipliers(p, Section8Field::omega());
    auto s1 = equilibrium_multipliers(p, Section8Field::sigma1());
    auto s2 = equilibrium_multipliers(p, Section8Field::sigma2());
    EXPECT_NEAR(a[0].real(), tp, 1e-6);
    EXPECT_NEAR(a[1].real(), tp, 1e-6);
    EXPECT_NEAR(w[0].real(), -tp, 1e-6);
    EXPECT_NEAR(w[1].real(), -tp, 1e-6);
    for (const auto& s : {s1, s2}) {
        EXPECT_NEAR(s[0].real(), -tp, 1e-6);
        EXPECT_NEAR(s[1].real(), tp, 1e-6);
    }
}

TEST(Section8, DriftIsSupportedNearSaddles) {
    Section8Field f;
    EXPECT_DOUBLE_EQ(f.drift({0.5, 0}), 1.0);
    EXPECT_DOUBLE_EQ(f.drift({0, 0.5}), -1.0);
    EXPECT_DOUBLE_EQ(f.drift({0.25, 0.25}), 0.0);
    EXPECT_DOUBLE_EQ(f.drift({0.5, 0.99}), f.drift({0.5, -0.01}));
}

TEST(Section8, EntranceLaminationHasFourArcs) {
    Section8Field f;
    auto m = measure_entrance_lamination(f, 64);
    ASSERT_EQ(m.arcs.size(), 4u);
    EXPECT_TRUE(m.gaps_consistent);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_TRUE(m.arcs[i].timeout);
        EXPECT_NEAR(m.arcs[i].lo, 0.25 * double(i), 1e-12);
        // neighbouring arcs run into different saddles
        EXPECT_NE(m.arcs[i].owner, m.arcs[(i + 1) % 4].owner);
    }
    auto g = m.gap_to_exit;
    std::sort(g.begin(), g.end());
    EXPECT_EQ(g, (std::vector<int>{0, 1, 2, 3}));
    Plug u = catalog_u_section8("U");
    for (const auto& gl : u.gaps) EXPECT_EQ(m.gap_to_exit[gl.entrance_band], int(gl.exit_band));
}

TEST(Section8, TransitGrowsNearTheLamination) {
    Section8Field f;
    double last = 0;
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        auto c = crossing_map(f, d);
        ASSERT_FALSE(c.timeout) << d;
        EXPECT_GT(c.transit_time, last) << d;
        last = c.transit_time;
    }
    EXPECT_TRUE(crossing_map(f, 0.25).timeout);
}

TEST(Section8, ExpansionProfileIsMonotone) {
    Section8Field f;
    auto samples = expansion_samples(f, 2, 1e-5, 1e-1);
    auto d = cone_expansion_profile(samples, {2, 4, 8, 16});
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LE(d[i], d[i - 1]);
    EXPECT_GT(d[0], 0);
    // halving the drift support keeps the profile the same order
    Section8Field g;
    g.drift_radius = 0.1;
    auto d2 = cone_expansion_profile(expansion_samples(g, 2, 1e-5, 1e-1), {2});
    EXPECT_GT(d2[0], 0);
}

TEST(Section8, UnstableConesMissStableCones) {
    Section8Field f;
    auto cones = cone_field(f, {1e-4, 1e-3, 0.3, 0.6});
    ASSERT_EQ(cones.size(), 4u);
    for (const auto& c : cones) {
        EXPECT_TRUE(c.excludes_stable) << c.x;
        EXPECT_NEAR(c.unstable.norm(), 1.0, 1e-12);
    }
}

TEST(Section8, TransverseCurves) {
    Section8Field f;
    for (std::int64_t q : {1, 2, 3, 5}) {
        auto c = transverse_curve_cq(q, f);
        EXPECT_GT(c.margin, 0);
        EXPECT_GT(c.disc_gap, 0);
        EXPECT_EQ(c.winding[0], 1);
        EXPECT_EQ(c.winding[1], q);
        for (std::int64_t q2 = 1; q2 <= 5; ++q2) EXPECT_EQ(curve_torus_intersection(c, q2), std::abs(q - q2));
    }
    EXPECT_THROW(transverse_curve_cq(0, f), PreconditionViolation);
}
