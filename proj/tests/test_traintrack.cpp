#include <gtest/gtest.h>

#include <map>
#include <random>

#include "anosov/traintrack.hpp"
#include "oracles.hpp"

using namespace anosov;

namespace {

Measure ints(std::initializer_list<int> w) {
    Measure m;
    for (int x : w) m.weights.push_back(Rational(x));
    return m;
}

// Branch weights recovered from a decomposition into weighted trainpaths.
std::map<std::string, std::int64_t> recompose(const std::vector<WeightedTrainpath>& ps) {
    std::map<std::string, std::int64_t> w;
    for (const auto& p : ps)
        for (const auto& b : p.branches) w[b.substr(0, b.size() - 1)] += p.weight;
    return w;
}

}  // namespace

TEST(TrainTrack, ParserErrorsCarryLineNumbers) {
    auto msg = [](const std::string& text) {
        try {
            parse_train_track(text);
        } catch (const MalformedInput& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_EQ(msg("switch a\nbranch x a:in b:out\n"), "line 2: unknown switch b");
    EXPECT_EQ(msg("switch a\nswitch a\n"), "line 2: duplicate switch a");
    EXPECT_EQ(msg("switch a\n\nbranch x a:up a:in\n"), "line 3: side tag must be in or out, got up");
    EXPECT_EQ(msg("switch a\nbranch x a a:in\n"), "line 2: endpoint a needs a side tag");
    EXPECT_EQ(msg("track\n"), "line 1: unknown record track");
    EXPECT_EQ(msg("switch a\nbranch x a:in a:out\nbranch x a:in a:out\n"), "line 3: duplicate branch x");
}

TEST(TrainTrack, FormatRoundTrips) {
    auto t = companion_chart_track();
    auto u = parse_train_track("# companion\n" + format_train_track(t));
    EXPECT_EQ(format_train_track(u), format_train_track(t));
    EXPECT_EQ(u.branches.size(), 5u);
}

TEST(TrainTrack, CompanionWeightsSatisfySwitchConditions) {
    auto t = companion_chart_track();
    EXPECT_TRUE(satisfies_switch_conditions(t, ints({1, 1, 2, 1, 1})));
    EXPECT_FALSE(satisfies_switch_conditions(t, ints({1, 1, 1, 1, 1})));
    EXPECT_THROW(satisfies_switch_conditions(t, ints({1, 1})), PreconditionViolation);
    EXPECT_TRUE(is_recurrent(t));
    auto m = positive_measure(t);
    ASSERT_TRUE(m);
    EXPECT_TRUE(satisfies_switch_conditions(t, *m));
}

TEST(TrainTrack, SingleLoop) {
    auto t = parse_train_track("switch s\nbranch a s:out s:in\n");
    auto m = positive_measure(t);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->weights[0], Rational(1));
    // both ends on one side: no legal continuation
    auto bad = parse_train_track("switch s\nbranch a s:out s:out\n");
    EXPECT_FALSE(is_recurrent(bad));
    EXPECT_FALSE(positive_measure(bad));
}

TEST(TrainTrack, DanglingBranchIsNotRecurrent) {
    auto t = parse_train_track(
        "switch s\nswitch u\n"
        "branch a s:out s:in\n"
        "branch b s:out u:in\n");
    EXPECT_FALSE(is_recurrent(t));
    EXPECT_FALSE(positive_measure(t));
    EXPECT_FALSE(oracle::recurrent(t));
}

TEST(TrainTrack, UnionOfRecurrentTracksIsRecurrent) {
    auto a = companion_chart_track();
    auto b = parse_train_track("switch s\nbranch a s:out s:in\n");
    auto u = disjoint_union(a, b);
    EXPECT_EQ(u.branches.size(), 6u);
    EXPECT_NO_THROW(u.validate());
    EXPECT_TRUE(is_recurrent(u));
    auto bad = parse_train_track("switch s\nbranch a s:out s:out\n");
    EXPECT_FALSE(is_recurrent(disjoint_union(a, bad)));
}

TEST(TrainTrack, MeasuresAreClosedUnderPositiveScaling) {
    auto t = companion_chart_track();
    auto m = ints({1, 1, 2, 1, 1});
    for (auto c : {Rational(1, 3), Rational(5), Rational(7, 2)}) EXPECT_TRUE(satisfies_switch_conditions(t, scale(m, c)));
    EXPECT_FALSE(satisfies_switch_conditions(t, scale(m, Rational(-1))));
}

TEST(TrainTrack, CycleDecompositionSumsBack) {
    auto t = companion_chart_track();
    for (auto m : {ints({1, 1, 2, 1, 1}), ints({3, 1, 4, 3, 1}), ints({0, 2, 2, 0, 2})}) {
        auto ps = cycle_decomposition(t, m);
        auto w = recompose(ps);
        for (std::size_t i = 0; i < t.branches.size(); ++i)
            EXPECT_EQ(w[t.branches[i].id], m.weights[i].numerator()) << t.branches[i].id;
    }
    EXPECT_THROW(cycle_decomposition(t, ints({1, 1, 1, 1, 1})), PreconditionViolation);
    Measure half = scale(ints({1, 1, 2, 1, 1}), Rational(1, 2));
    EXPECT_THROW(cycle_decomposition(t, half), PreconditionViolation);
}

TEST(TrainTrack, ExhaustiveSmallTracksMatchOracle) {
    auto corpus = oracle::exhaustive_tracks(2, 3);
    std::size_t rec = 0;
    for (const auto& t : corpus) {
        bool o = oracle::recurrent(t);
        ASSERT_EQ(is_recurrent(t), o) << format_train_track(t);
        auto m = positive_measure(t);
        ASSERT_EQ(m.has_value(), o);
        if (m) {
            EXPECT_TRUE(satisfies_switch_conditions(t, *m));
            auto w = recompose(cycle_decomposition(t, *m));
            for (std::size_t i = 0; i < t.branches.size(); ++i) EXPECT_EQ(w[t.branches[i].id], m->weights[i].numerator());
        }
        rec += o;
    }
    EXPECT_GT(rec, 0u);
    EXPECT_LT(rec, corpus.size());
}

TEST(TrainTrack, RandomTracksMatchOracle) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 500; ++i) {
        auto t = oracle::random_track(rng, 10);
        ASSERT_EQ(is_recurrent(t), oracle::recurrent(t)) << format_train_track(t);
    }
}
