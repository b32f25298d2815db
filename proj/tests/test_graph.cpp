#include <gtest/gtest.h>

#include <random>

#include "anosov/graph.hpp"
#include "oracles.hpp"

using namespace anosov;

TEST(Graph, TarjanSplitsIntoComponents) {
    Graph g;
    g.add_edge("a", "b");
    g.add_edge("b", "a");
    g.add_edge("b", "c");
    g.add_node("d");
    auto sccs = strongly_connected_components(g);
    ASSERT_EQ(sccs.size(), 3u);
    std::set<std::vector<std::string>> got(sccs.begin(), sccs.end());
    EXPECT_TRUE(got.count({"a", "b"}));
    EXPECT_TRUE(got.count({"c"}));
}

TEST(Graph, LoneNodeNeedsSelfLoop) {
    Graph g;
    g.add_node("x");
    EXPECT_FALSE(is_combinatorially_transitive(g));
    g.add_edge("x", "x");
    EXPECT_TRUE(is_combinatorially_transitive(g));
    EXPECT_THROW(is_combinatorially_transitive(Graph{}), PreconditionViolation);
}

TEST(Graph, RandomGraphsAgreeWithReachability) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        auto g = oracle::random_graph(rng, 12);
        ASSERT_EQ(is_combinatorially_transitive(g.graph()), oracle::transitive(g.n, g.edges)) << i;
    }
}

TEST(Graph, DotQuotesNames) {
    Graph g;
    g.add_edge("M\\N(O)", "b\"");
    std::string d = to_dot(g, "t");
    EXPECT_NE(d.find("\"M\\\\N(O)\" -> \"b\\\"\""), std::string::npos);
    EXPECT_EQ(d.rfind("digraph \"t\" {", 0), 0u);
}
