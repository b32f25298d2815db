#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

struct Graph {
    std::vector<std::string> nodes;
    std::set<std::pair<std::string, std::string>> edges;

    void add_node(const std::string& v) {
        if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
    }
    void add_edge(const std::string& u, const std::string& v) {
        add_node(u);
        add_node(v);
        edges.insert({u, v});
    }
};

// Tarjan; components come out in reverse topological order.
inline std::vector<std::vector<std::string>> strongly_connected_components(const Graph& g) {
    std::map<std::string, std::size_t> id;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) id[g.nodes[i]] = i;
    std::size_t n = g.nodes.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [u, v] : g.edges) {
        auto a = id.find(u), b = id.find(v);
        if (a == id.end() || b == id.end()) throw ModelError("edge references unknown node");
        adj[a->second].push_back(b->second);
    }
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = true;
        for (std::size_t w : adj[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on[w] = false;
                comp.push_back(g.nodes[w]);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);
    return out;
}

// Every node reaches every node along a nonempty path; a lone node needs a
// self-loop.
inline bool is_combinatorially_transitive(const Graph& g) {
    if (g.nodes.empty()) throw PreconditionViolation("transitivity of an empty graph");
    if (strongly_connected_components(g).size() != 1) return false;
    return g.nodes.size() > 1 || g.edges.count({g.nodes[0], g.nodes[0]}) > 0;
}

inline std::string to_dot(const Graph& g, const std::string& name = "transitivity") {
    auto q = [](const std::string& s) {
        std::string r = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r + "\"";
    };
    std::vector<std::string> nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end());
    std::string s = "digraph " + q(name) + " {\n";
    for (const auto& v : nodes) s += "  " + q(v) + ";\n";
    for (const auto& [u, v] : g.edges) s += "  " + q(u) + " -> " + q(v) + ";\n";
    return s + "}\n";
}

}  // namespace anosov
