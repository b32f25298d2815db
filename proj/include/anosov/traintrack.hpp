#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/graph.hpp"
#include "anosov/rational.hpp"

namespace anosov {

enum class SwitchSide { In, Out };

inline const char* to_string(SwitchSide s) { return s == SwitchSide::In ? "in" : "out"; }

struct BranchEnd {
    std::size_t sw = 0;
    SwitchSide side = SwitchSide::In;
};

struct Branch {
    std::string id;
    BranchEnd end[2];
};

struct TrainTrack {
    std::vector<std::string> switches;
    std::vector<Branch> branches;

    std::size_t switch_index(const std::string& s) const {
        auto it = std::find(switches.begin(), switches.end(), s);
        if (it == switches.end()) throw MalformedInput("unknown switch " + s);
        return std::size_t(it - switches.begin());
    }
    std::size_t branch_index(const std::string& b) const {
        for (std::size_t i = 0; i < branches.size(); ++i)
            if (branches[i].id == b) return i;
        throw MalformedInput("unknown branch " + b);
    }

    void validate() const {
        for (std::size_t i = 0; i < switches.size(); ++i)
            for (std::size_t j = i + 1; j < switches.size(); ++j)
                if (switches[i] == switches[j]) throw MalformedInput("duplicate switch " + switches[i]);
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (branches[i].id.empty()) throw MalformedInput("branch without id");
            for (std::size_t j = i + 1; j < branches.size(); ++j)
                if (branches[i].id == branches[j].id) throw MalformedInput("duplicate branch " + branches[i].id);
            for (const auto& e : branches[i].end)
                if (e.sw >= switches.size()) throw MalformedInput("branch " + branches[i].id + " ends at no switch");
        }
    }
};

struct Measure {
    std::vector<Rational> weights;  // indexed like branches

    bool positive() const {
        return std::all_of(weights.begin(), weights.end(), [](const Rational& w) { return w > 0; });
    }
};

// Text format, one record per line:
//   switch <id>
//   branch <id> <switch>:<in|out> <switch>:<in|out>
// '#' starts a comment.
inline TrainTrack parse_train_track(const std::string& text) {
    TrainTrack t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw MalformedInput("line " + std::to_string(lineno) + ": " + msg);
    };
    std::vector<std::pair<int, std::vector<std::string>>> pending;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string w; ls >> w;) tok.push_back(w);
        if (tok.empty()) continue;
        if (tok[0] == "switch") {
            if (tok.size() != 2) fail("expected 'switch <id>'");
            if (std::find(t.switches.begin(), t.switches.end(), tok[1]) != t.switches.end())
                fail("duplicate switch " + tok[1]);
            t.switches.push_back(tok[1]);
        } else if (tok[0] == "branch") {
            if (tok.size() != 4) fail("expected 'branch <id> <switch>:<side> <switch>:<side>'");
            pending.push_back({lineno, tok});
        } else {
            fail("unknown record " + tok[0]);
        }
    }
    for (auto& [ln, tok] : pending) {
        lineno = ln;
        Branch b;
        b.id = tok[1];
        for (int j = 0; j < 2; ++j) {
            const std::string& e = tok[std::size_t(2 + j)];
            auto c = e.find(':');
            if (c == std::string::npos) fail("endpoint " + e + " needs a side tag");
            std::string sw = e.substr(0, c), side = e.substr(c + 1);
            auto it = std::find(t.switches.begin(), t.switches.end(), sw);
            if (it == t.switches.end()) fail("unknown switch " + sw);
            if (side != "in" && side != "out") fail("side tag must be in or out, got " + side);
            b.end[j] = {std::size_t(it - t.switches.begin()), side == "in" ? SwitchSide::In : SwitchSide::Out};
        }
        for (const auto& o : t.branches)
            if (o.id == b.id) fail("duplicate branch " + b.id);
        t.branches.push_back(b);
    }
    return t;
}

inline std::string format_train_track(const TrainTrack& t) {
    std::string s;
    for (const auto& w : t.switches) s += "switch " + w + "\n";
    for (const auto& b : t.branches) {
        s += "branch " + b.id;
        for (const auto& e : b.end) s += " " + t.switches[e.sw] + ":" + to_string(e.side);
        s += "\n";
    }
    return s;
}

inline TrainTrack disjoint_union(const TrainTrack& a, const TrainTrack& b, const std::string& pa = "a.",
                                 const std::string& pb = "b.") {
    TrainTrack t;
    for (const auto& s : a.switches) t.switches.push_back(pa + s);
    for (const auto& s : b.switches) t.switches.push_back(pb + s);
    for (auto br : a.branches) {
        br.id = pa + br.id;
        t.branches.push_back(br);
    }
    for (auto br : b.branches) {
        br.id = pb + br.id;
        for (auto& e : br.end) e.sw += a.switches.size();
        t.branches.push_back(br);
    }
    return t;
}

// Trainpath node (branch, d): branch traversed from end d to end 1-d. Node
// index 2*branch + d.
struct TrackPathGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> succ;
};

inline TrackPathGraph path_graph(const TrainTrack& t) {
    t.validate();
    TrackPathGraph g;
    g.n = 2 * t.branches.size();
    g.succ.assign(g.n, {});
    for (std::size_t u = 0; u < g.n; ++u) {
        const BranchEnd& arrive = t.branches[u / 2].end[1 - u % 2];
        for (std::size_t v = 0; v < g.n; ++v) {
            const BranchEnd& leave = t.branches[v / 2].end[v % 2];
            if (leave.sw == arrive.sw && leave.side != arrive.side) g.succ[u].push_back(v);
        }
    }
    return g;
}

inline Graph to_graph(const TrackPathGraph& pg, const TrainTrack& t) {
    Graph g;
    auto name = [&](std::size_t v) { return t.branches[v / 2].id + (v % 2 ? "-" : "+"); };
    for (std::size_t v = 0; v < pg.n; ++v) g.add_node(name(v));
    for (std::size_t u = 0; u < pg.n; ++u)
        for (std::size_t v : pg.succ[u]) g.add_edge(name(u), name(v));
    return g;
}

namespace detail {

// Shortest closed trainpath through node s, as a node sequence starting at s.
inline std::optional<std::vector<std::size_t>> cycle_through(const TrackPathGraph& g, std::size_t s) {
    std::vector<long> parent(g.n, -1);
    std::vector<std::size_t> queue;
    std::vector<bool> seen(g.n, false);
    for (std::size_t v : g.succ[s]) {
        if (v == s) return std::vector<std::size_t>{s};
        if (!seen[v]) {
            seen[v] = true;
            parent[v] = long(s);
            queue.push_back(v);
        }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t u = queue[qi];
        for (std::size_t v : g.succ[u]) {
            if (v == s) {
                std::vector<std::size_t> path;
                for (long w = long(u); w != long(s); w = parent[std::size_t(w)]) path.push_back(std::size_t(w));
                path.push_back(s);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (!seen[v]) {
                seen[v] = true;
                parent[v] = long(u);
                queue.push_back(v);
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline bool is_recurrent(const TrainTrack& t) {
    auto pg = path_graph(t);
    auto g = to_graph(pg, t);
    if (t.branches.empty()) return true;
    std::map<std::string, std::size_t> comp_size;
    std::map<std::string, std::string> comp_of;
    for (const auto& c : strongly_connected_components(g))
        for (const auto& v : c) {
            comp_of[v] = c.front();
            comp_size[c.front()] = c.size();
        }
    for (const auto& b : t.branches) {
        bool on_cycle = false;
        for (const char* d : {"+", "-"}) {
            std::string v = b.id + d;
            if (comp_size[comp_of[v]] > 1 || g.edges.count({v, v})) on_cycle = true;
        }
        if (!on_cycle) return false;
    }
    return true;
}

inline bool satisfies_switch_conditions(const TrainTrack& t, const Measure& m) {
    if (m.weights.size() != t.branches.size()) throw PreconditionViolation("measure size does not match the track");
    std::vector<Rational> in(t.switches.size()), out(t.switches.size());
    for (std::size_t i = 0; i < t.branches.size(); ++i) {
        if (m.weights[i] < 0) return false;
        for (const auto& e : t.branches[i].end) (e.side == SwitchSide::In ? in : out)[e.sw] += m.weights[i];
    }
    return in == out;
}

// Sum over branches of the traversal counts of one closed trainpath through
// that branch; none when some branch lies on no closed trainpath.
inline std::optional<Measure> positive_measure(const TrainTrack& t) {
    auto g = path_graph(t);
    std::vector<std::int64_t> w(t.branches.size(), 0);
    for (std::size_t b = 0; b < t.branches.size(); ++b) {
        if (w[b] > 0) continue;
        auto c = detail::cycle_through(g, 2 * b);
        if (!c) c = detail::cycle_through(g, 2 * b + 1);
        if (!c) return std::nullopt;
        for (std::size_t v : *c) ++w[v / 2];
    }
    Measure m;
    for (auto x : w) m.weights.push_back(Rational(x));
    if (!satisfies_switch_conditions(t, m) || !m.positive()) throw ModelError("cycle sum is not a positive measure");
    return m;
}

struct WeightedTrainpath {
    std::vector<std::string> branches;  // cyclic sequence, branch id plus '+'/'-' direction
    std::int64_t weight = 0;
};

// Splits an integral measure into closed trainpaths by pairing weight units
// across each switch in branch order.
inline std::vector<WeightedTrainpath> cycle_decomposition(const TrainTrack& t, const Measure& m) {
    if (!satisfies_switch_conditions(t, m)) throw PreconditionViolation("not a measure");
    std::vector<std::int64_t> w;
    for (const auto& x : m.weights) {
        if (x.denominator() != 1) throw PreconditionViolation("cycle decomposition needs integral weights");
        w.push_back(x.numerator());
    }
    // unit = (branch, end, strand); pair in-side units with out-side units
    using Unit = std::array<std::int64_t, 3>;
    std::map<Unit, Unit> partner;
    for (std::size_t s = 0; s < t.switches.size(); ++s) {
        std::vector<Unit> ins, outs;
        for (std::size_t b = 0; b < t.branches.size(); ++b)
            for (int j = 0; j < 2; ++j)
                if (t.branches[b].end[j].sw == s)
                    for (std::int64_t k = 0; k < w[b]; ++k)
                        (t.branches[b].end[j].side == SwitchSide::In ? ins : outs)
                            .push_back({std::int64_t(b), j, k});
        for (std::size_t i = 0; i < ins.size(); ++i) {
            partner[ins[i]] = outs[i];
            partner[outs[i]] = ins[i];
        }
    }
    std::map<std::pair<std::int64_t, std::int64_t>, bool> used;
    std::map<std::vector<std::string>, std::int64_t> paths;
    for (std::size_t b = 0; b < t.branches.size(); ++b)
        for (std::int64_t k = 0; k < w[b]; ++k) {
            if (used[{std::int64_t(b), k}]) continue;
            std::vector<std::string> path;
            Unit cur{std::int64_t(b), 0, k};  // entering at end 0
            while (!used[{cur[0], cur[2]}]) {
                used[{cur[0], cur[2]}] = true;
                path.push_back(t.branches[std::size_t(cur[0])].id + (cur[1] == 0 ? "+" : "-"));
                cur = partner.at({cur[0], 1 - cur[1], cur[2]});
            }
            // canonical rotation
            auto best = path;
            for (std::size_t r = 1; r < path.size(); ++r) {
                std::vector<std::string> rot(path.begin() + long(r), path.end());
                rot.insert(rot.end(), path.begin(), path.begin() + long(r));
                best = std::min(best, rot);
            }
            ++paths[best];
        }
    std::vector<WeightedTrainpath> out;
    for (auto& [p, c] : paths) out.push_back({p, c});
    return out;
}

inline Measure scale(const Measure& m, const Rational& c) {
    Measure r = m;
    for (auto& x : r.weights) x *= c;
    return r;
}

inline std::string format_measure(const TrainTrack& t, const Measure& m) {
    std::string s;
    for (std::size_t i = 0; i < t.branches.size(); ++i) s += t.branches[i].id + " " + to_string(m.weights[i]) + "\n";
    return s;
}

// Local chart of the companion example: two branches merge into e, which
// splits again, with the ends reconnected through two more switches.
inline TrainTrack companion_chart_track() {
    return parse_train_track(
        "switch s1\nswitch s2\nswitch s3\nswitch s4\n"
        "branch a s3:out s1:in\n"
        "branch b s4:out s1:in\n"
        "branch e s1:out s2:in\n"
        "branch c s2:out s3:in\n"
        "branch d s2:out s4:in\n");
}

}  // namespace anosov
