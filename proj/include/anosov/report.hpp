#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "anosov/catalog.hpp"
#include "anosov/gluing.hpp"
#include "anosov/gluing_maps.hpp"
#include "anosov/numeric.hpp"
#include "anosov/surgery.hpp"
#include "anosov/traintrack.hpp"

namespace anosov::report {

using nlohmann::json;

struct Check {
    std::string name;
    bool pass = false;
    json evidence;
};

struct Report {
    json body = json::object();
    std::vector<Check> checks;
    std::map<std::string, std::string> exports;  // file name -> contents

    void check(const std::string& name, bool pass, json evidence = json::object()) {
        for (const auto& c : checks)
            if (c.name == name) throw ModelError("check " + name + " reported twice");
        checks.push_back({name, pass, std::move(evidence)});
    }
    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    json to_json() const {
        json j = body;
        j["checks"] = json::array();
        for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"evidence", c.evidence}});
        j["all_pass"] = all_pass();
        return j;
    }
};

using Params = std::map<std::string, std::string>;

// ---- summaries ----

inline json torus_json(const BoundaryTorus& t) {
    const auto& l = t.lamination;
    json j = {{"id", t.id},
              {"side", to_string(t.side)},
              {"label", t.label},
              {"leaves", l.n_compact()},
              {"filling", l.is_filling()},
              {"annular_gaps", l.annular_gaps()},
              {"foliation", l.is_foliation}};
    std::string abs;
    for (Sign s : l.orientations()) abs += as_char(s);
    j["orientations"] = abs;
    if (l.n_compact() > 0) {
        j["sign_word"] = l.sign_word().str();
        j["canonical_type"] = l.type().canonical.str();
    }
    return j;
}

inline json plug_json(const Plug& p) {
    json j = {{"id", p.id}, {"attracting", p.is_attracting()}, {"repelling", p.is_repelling()},
              {"saddle", p.is_saddle_plug()}};
    j["pieces"] = json::array();
    for (const auto& x : p.pieces)
        j["pieces"].push_back({{"id", x.id}, {"kind", to_string(x.kind)}, {"transitive", x.transitive},
                               {"multipliers", to_string(x.multipliers)}});
    j["tori"] = json::array();
    for (const auto* side : {&p.entrance, &p.exit})
        for (const auto& t : *side) j["tori"].push_back(torus_json(t));
    j["manifold_pieces"] = p.meta.manifold_pieces;
    j["glue_history"] = p.meta.glue_history;
    j["jsj"] = p.meta.jsj_label;
    return j;
}

inline json certificate_json(const GluingPair& pr) {
    json j = {{"exit", pr.exit}, {"entrance", pr.entrance}, {"map", pr.map.str()}};
    if (!pr.cert) {
        j["certified"] = false;
        return j;
    }
    const auto& c = *pr.cert;
    j["transverse"] = c.ok;
    j["strong"] = c.strong;
    j["failure"] = c.failure;
    j["witness"] = c.witness ? json::array({c.witness->x, c.witness->y}) : json(nullptr);
    j["crossings"] = c.crossings;
    j["leaf_intersections"] = c.leaf_intersections;
    return j;
}

inline json model_json(const ClosedModel& m) {
    json j = {{"id", m.plug.id},
              {"status", to_string(m.status)},
              {"transitive", m.transitive},
              {"closed", m.closed},
              {"jsj", m.jsj.empty() ? m.plug.meta.jsj_label : m.jsj}};
    j["hypotheses"] = json::object();
    for (const auto& h : m.hypotheses) j["hypotheses"][h.name] = h.holds;
    j["invariants"] = m.invariants;
    auto d = m.descriptor();
    j["descriptor"] = {{"pieces", d.pieces}, {"gluings", d.gluings}};
    j["certificates"] = json::array();
    for (const auto& pr : m.pairs) j["certificates"].push_back(certificate_json(pr));
    j["plug"] = plug_json(m.plug);
    return j;
}

// ---- exports ----

inline std::string safe_name(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
    return s;
}

inline std::string lamination_record(const Plug& p) {
    std::string s;
    for (const auto* side : {&p.entrance, &p.exit})
        for (const auto& t : *side) {
            const auto& l = t.lamination;
            s += t.id + " " + to_string(t.side) + " leaves=" + std::to_string(l.n_compact());
            if (l.n_compact() > 0) s += " word=" + l.sign_word().str() + " type=" + l.type().canonical.str();
            s += " profiles=" + profiles_string(l) + "\n";
        }
    return s;
}

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Normal form of one boundary lamination in the unit square.
inline std::string lamination_svg(const BoundaryTorus& t) {
    const double S = 400;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"440\" viewBox=\"-10 -30 420 440\">\n";
    s += "<text x=\"0\" y=\"-12\" font-size=\"12\">" + t.id + " (" + to_string(t.side) + ")</text>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"#888\"/>\n";
    if (t.lamination.n_compact() > 0) {
        DrawOptions opt;
        opt.samples_per_band = 3;
        auto curves = draw(LamGeometry(t.lamination, Chart{}), 0, opt);
        for (const auto& c : curves) {
            std::string stroke = c.compact ? (t.lamination.leaves[c.index].orientation == Sign::Plus ? "#c00" : "#00c")
                                           : "#444";
            std::string pts;
            double prev = -1;
            auto flush = [&]() {
                if (!pts.empty())
                    s += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                         (c.compact ? "2" : "0.8") + "\" points=\"" + pts + "\"/>\n";
                pts.clear();
            };
            for (const auto& p : c.pts) {
                double x = frac(p.x), y = frac(p.y);
                if (prev >= 0 && std::fabs(y - prev) > 0.5) flush();
                prev = y;
                pts += fmt_num(x * S) + "," + fmt_num((1 - y) * S) + " ";
            }
            flush();
        }
    }
    return s + "</svg>\n";
}

inline void export_plug(Report& r, const Plug& p) {
    r.exports[safe_name(p.id) + ".lam.txt"] = lamination_record(p);
    for (const auto* side : {&p.entrance, &p.exit})
        for (const auto& t : *side) r.exports[safe_name(t.id) + ".svg"] = lamination_svg(t);
}

inline void export_model(Report& r, const ClosedModel& m) {
    r.exports[safe_name(m.plug.id) + ".dot"] = to_dot(m.graph, m.plug.id);
    export_plug(r, m.plug);
}

// ---- parameters ----

inline std::string param(const Params& p, const std::string& k, const std::string& dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

inline double param_double(const Params& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    if (it == p.end()) return dflt;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw MalformedInput("parameter " + k + " is not a number: " + it->second);
    }
}

inline int param_int(const Params& p, const std::string& k, int dflt) {
    double v = param_double(p, k, dflt);
    if (v != std::floor(v)) throw MalformedInput("parameter " + k + " must be an integer");
    return int(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline void allow_params(const Params& p, const std::string& pipeline, std::set<std::string> allowed) {
    for (const auto& [k, v] : p)
        if (!allowed.count(k)) throw MalformedInput("pipeline " + pipeline + " has no parameter " + k);
}

// ---- pipelines ----

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MalformedInput("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void pipeline_both_flows(Report& r) {
    auto [a, b] = build_both_flows();
    r.body["models"] = {model_json(a), model_json(b)};
    r.check("first model not transitive", !a.transitive && a.status != AnosovStatus::NotCertified,
            {{"status", to_string(a.status)}, {"transitive", a.transitive}});
    r.check("second model transitive", b.transitive, {{"status", to_string(b.status)}});
    r.check("both models closed", a.closed && b.closed);
    r.check("same manifold descriptor", a.descriptor() == b.descriptor(),
            {{"pieces", a.descriptor().pieces}, {"gluings", a.descriptor().gluings}});
    export_model(r, a);
    export_model(r, b);
}

inline void pipeline_richer(Report& r) {
    Plug base = catalog_anosov_base("B");
    ClosedModel m = blow_up_excise_glue(base, {"B.X", "o1"}, {"B.X", "o2"});
    r.body["models"] = {model_json(m)};
    r.check("richer model realizable", m.status != AnosovStatus::NotCertified, {{"status", to_string(m.status)}});
    r.check("richer model transitive", m.transitive);
    r.check("richer model closed", m.closed);
    export_model(r, m);
}

inline void pipeline_attractors(Report& r, const Params& p) {
    allow_params(p, "attractors", {"sigma"});
    std::vector<SignWord> targets;
    for (const auto& w : split(param(p, "sigma", "+-+"), ',')) targets.push_back(SignWord::parse(w));
    Plug a = realize_attractor(targets);
    r.body["plugs"] = {plug_json(a)};
    r.check("realized plug attracting", a.is_attracting());
    bool eq = a.entrance.size() == targets.size();
    json ev = json::array();
    for (std::size_t j = 0; eq && j < targets.size(); ++j) {
        const auto& lam = a.entrance[j].lamination;
        bool ok = types_equivalent(lam.sign_word(), targets[j]);
        ev.push_back({{"target", targets[j].str()}, {"realized", lam.sign_word().str()}, {"equivalent", ok}});
        eq = eq && ok;
    }
    r.check("entrance types equal input", eq, ev);
    export_plug(r, a);
}

inline void pipeline_embed(Report& r, const Params& p) {
    allow_params(p, "embed", {"kind", "n"});
    std::string kind = param(p, "kind", "section8_doubled");
    Plug in = kind == "section8_doubled" ? section8_doubled("D") : kind == "M1" ? build_m1(param_int(p, "n", 1))
                                                                             : [&] {
                                                                                   CatalogParams cp;
                                                                                   cp.n = param_int(p, "n", 1);
                                                                                   return catalog(kind, "P", cp);
                                                                               }();
    ClosedModel m = embed_in_anosov(in);
    r.body["models"] = {model_json(m)};
    r.check("embedding closed", m.closed);
    r.check("embedding realizable", m.status != AnosovStatus::NotCertified, {{"status", to_string(m.status)}});
    r.check("embedding transitive", m.transitive);
    export_model(r, m);
}

inline void pipeline_n_flows(Report& r, const Params& p) {
    allow_params(p, "n_flows", {"n"});
    int n = param_int(p, "n", 3);
    auto models = build_n_flows(n);
    r.body["models"] = json::array();
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    bool distinct = true, transitive = true, expected = true;
    json inv = json::array();
    for (std::size_t k = 0; k < models.size(); ++k) {
        const auto& m = models[k];
        r.body["models"].push_back(model_json(m));
        auto v = nonequivalence_invariant(m);
        distinct = seen.insert(v).second && distinct;
        transitive = transitive && m.transitive;
        std::int64_t kk = std::int64_t(k) + 1;
        expected = expected && v == std::pair<std::int64_t, std::int64_t>{kk, 2 * n + 2 - kk};
        inv.push_back(m.invariants.at("annulus_counts"));
        export_model(r, m);
    }
    r.body["invariants"] = inv;
    r.check("model count", int(models.size()) == n, {{"models", models.size()}});
    r.check("invariants {k,2n+2-k}", expected, inv);
    r.check("invariants pairwise distinct", distinct);
    r.check("all models transitive", transitive);
}

inline void pipeline_infinite_tori(Report& r, const Params& p) {
    allow_params(p, "infinite_tori", {"q_max"});
    int q_max = param_int(p, "q_max", 3);
    if (q_max < 1) throw MalformedInput("q_max must be at least 1");
    ClosedModel m = build_infinite_tori_model();
    r.body["models"] = {model_json(m)};
    r.check("model realizable", m.status != AnosovStatus::NotCertified, {{"status", to_string(m.status)}});
    r.check("model transitive", m.transitive);
    export_model(r, m);
    numeric::Section8Field f;
    json curves = json::array(), matrix = json::array();
    bool curves_ok = true, matrix_ok = true;
    std::vector<numeric::TransverseCurve> cs;
    for (int q = 1; q <= q_max; ++q) {
        cs.push_back(numeric::transverse_curve_cq(q, f));
        const auto& c = cs.back();
        curves_ok = curves_ok && c.margin > 0 && c.disc_gap > 0 && c.winding[0] == 1 && c.winding[1] == q;
        curves.push_back({{"q", q}, {"winding", c.winding}, {"margin", c.margin}, {"disc_gap", c.disc_gap}});
    }
    for (int q = 1; q <= q_max; ++q) {
        json row = json::array();
        for (int q2 = 1; q2 <= q_max; ++q2) {
            std::int64_t a = torus_intersection(q, q2);
            std::int64_t b = numeric::curve_torus_intersection(cs[std::size_t(q - 1)], q2);
            matrix_ok = matrix_ok && a == std::abs(q - q2) && b == a;
            row.push_back(a);
        }
        matrix.push_back(row);
    }
    r.body["transverse_curves"] = curves;
    r.body["intersection_matrix"] = matrix;
    r.check("transverse curves c_q", curves_ok, curves);
    r.check("intersections |q-q'|", matrix_ok, matrix);
}

inline std::string section8_svg(const numeric::Section8Field& f, const numeric::MeasuredLamination& m) {
    const double S = 400;
    auto X = [&](double x) { return fmt_num((x + 0.25) * S); };
    auto Y = [&](double y) { return fmt_num((0.75 - y) * S); };
    std::string s =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
    s += "<rect width=\"400\" height=\"400\" fill=\"white\" stroke=\"#888\"/>\n";
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            Eigen::Vector2d p(-0.25 + i / 20.0, -0.25 + j / 20.0);
            Eigen::Vector2d v = f.base(p);
            double nv = v.norm();
            if (nv < 1e-9) continue;
            v *= 0.02 / nv;
            s += "<line x1=\"" + X(p.x()) + "\" y1=\"" + Y(p.y()) + "\" x2=\"" + X(p.x() + v.x()) + "\" y2=\"" +
                 Y(p.y() + v.y()) + "\" stroke=\"#999\"/>\n";
        }
    // separatrices of the two saddles
    for (double c : {0.0, 0.5}) {
        s += "<line x1=\"" + X(c) + "\" y1=\"0\" x2=\"" + X(c) + "\" y2=\"400\" stroke=\"#6a6\" stroke-dasharray=\"4\"/>\n";
        s += "<line x1=\"0\" y1=\"" + Y(c) + "\" x2=\"400\" y2=\"" + Y(c) + "\" stroke=\"#6a6\" stroke-dasharray=\"4\"/>\n";
    }
    for (auto c : {numeric::Section8Field::alpha(), numeric::Section8Field::omega()})
        s += "<circle cx=\"" + X(c.x()) + "\" cy=\"" + Y(c.y()) + "\" r=\"" + fmt_num(f.radius * S) +
             "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& a : m.arcs) {
        for (double x : {a.lo, a.hi}) {
            auto p = numeric::entrance_point(f, frac(x));
            s += "<circle cx=\"" + X(p.x()) + "\" cy=\"" + Y(p.y()) + "\" r=\"4\" fill=\"" +
                 (a.owner == "s1" ? "#c00" : "#00c") + "\"/>\n";
        }
    }
    return s + "</svg>\n";
}

inline void pipeline_section8_numeric(Report& r, const Params& p) {
    allow_params(p, "section8_numeric", {"samples", "t_max", "per_decade"});
    int samples = param_int(p, "samples", 256);
    int per_decade = param_int(p, "per_decade", 4);
    if (samples < 8 || per_decade < 1) throw MalformedInput("samples >= 8 and per_decade >= 1 required");
    std::vector<double> tmaxes;
    for (const auto& t : split(param(p, "t_max", "100,200,400"), ',')) tmaxes.push_back(param_double({{"t", t}}, "t", 0));
    numeric::Section8Field f;

    // equilibrium types
    numeric::Planar base = [&](const Eigen::Vector2d& x) { return f.base(x); };
    auto ev = [&](Eigen::Vector2d x) {
        auto e = numeric::equilibrium_multipliers(base, x);
        return std::array<double, 2>{e[0].real(), e[1].real()};
    };
    auto ea = ev(numeric::Section8Field::alpha()), e1 = ev(numeric::Section8Field::sigma1()),
         e2 = ev(numeric::Section8Field::sigma2()), eo = ev(numeric::Section8Field::omega());
    double tp = 2 * kPi;
    bool types = std::fabs(ea[0] - tp) < 1e-6 && std::fabs(ea[1] - tp) < 1e-6 && e1[0] < 0 && e1[1] > 0 &&
                 e2[0] < 0 && e2[1] > 0 && std::fabs(eo[0] + tp) < 1e-6 && std::fabs(eo[1] + tp) < 1e-6;
    r.check("equilibrium types source/saddle/saddle/sink", types,
            {{"alpha", ea}, {"sigma1", e1}, {"sigma2", e2}, {"omega", eo}});

    // lamination trace per cap
    Plug u = catalog_u_section8("U");
    const auto& cin = u.torus("U.in").lamination;
    std::vector<int> catalog_gaps(cin.n_compact(), -1);
    for (const auto& g : u.gaps) catalog_gaps[g.entrance_band] = int(g.exit_band);
    std::vector<std::string> catalog_owners;
    for (const auto& l : cin.leaves) catalog_owners.push_back(l.owner.substr(l.owner.rfind('.') + 1));
    json traces = json::array();
    bool stable = true;
    numeric::MeasuredLamination ref;
    for (std::size_t i = 0; i < tmaxes.size(); ++i) {
        numeric::NumericConfig cfg;
        cfg.t_max = tmaxes[i];
        auto m = numeric::measure_entrance_lamination(f, samples, cfg);
        json arcs = json::array();
        std::vector<std::string> owners;
        for (const auto& a : m.arcs) {
            arcs.push_back({{"lo", a.lo}, {"hi", a.hi}, {"owner", a.owner}, {"timeout", a.timeout}});
            owners.push_back(a.owner);
        }
        traces.push_back({{"t_max", tmaxes[i]}, {"arcs", arcs}, {"gap_to_exit", m.gap_to_exit}});
        r.check("entrance arcs at T_max=" + fmt_num(tmaxes[i]), m.arcs.size() == 4, {{"arcs", m.arcs.size()}});
        if (i == 0) ref = m;
        stable = stable && m.arcs.size() == ref.arcs.size() && m.gap_to_exit == ref.gap_to_exit;
    }
    r.body["entrance_traces"] = traces;
    r.check("arc count stable under T_max", stable);
    bool alternate = !ref.arcs.empty();
    std::vector<std::string> owners;
    for (std::size_t i = 0; i < ref.arcs.size(); ++i) {
        owners.push_back(ref.arcs[i].owner);
        alternate = alternate && ref.arcs[i].owner != ref.arcs[(i + 1) % ref.arcs.size()].owner;
    }
    r.check("adjacent arcs owned by different saddles", alternate && owners == catalog_owners,
            {{"measured", owners}, {"catalog", catalog_owners}});
    std::vector<int> sorted = ref.gap_to_exit;
    std::sort(sorted.begin(), sorted.end());
    bool bijective = sorted == std::vector<int>{0, 1, 2, 3};
    r.check("gap bijection 4<->4", bijective && ref.gaps_consistent && ref.gap_to_exit == catalog_gaps,
            {{"measured", ref.gap_to_exit}, {"catalog", catalog_gaps}, {"consistent", ref.gaps_consistent}});

    numeric::NumericConfig cfg;
    json transit = json::array();
    bool monotone = true;
    double last = -1;
    for (int k = 1; k <= 5; ++k) {
        auto c = numeric::crossing_map(f, std::pow(10.0, -k), cfg);
        transit.push_back({{"distance", std::pow(10.0, -k)}, {"time", c.transit_time}});
        monotone = monotone && !c.timeout && c.transit_time > last;
        last = c.transit_time;
    }
    r.check("transit time increases towards the lamination", monotone, transit);

    std::vector<double> lambdas = {2, 4, 8};
    auto coarse = numeric::expansion_samples(f, per_decade, 1e-5, 1e-1, cfg);
    auto fine = numeric::expansion_samples(f, 2 * per_decade, 1e-5, 1e-1, cfg);
    auto d1 = numeric::cone_expansion_profile(coarse, lambdas), d2 = numeric::cone_expansion_profile(fine, lambdas);
    bool prof = d1[0] >= d1[1] && d1[1] >= d1[2] && d1[2] > 0;
    r.check("expansion profile d(2)>=d(4)>=d(8)>0", prof, {{"lambda", lambdas}, {"d", d1}});
    bool stab = true;
    double step = std::pow(10.0, 1.0 / per_decade);
    for (std::size_t i = 0; i < lambdas.size(); ++i) stab = stab && std::fabs(d2[i] - d1[i]) < d1[i] * (step - 1);
    r.check("expansion profile stable under refinement", stab, {{"coarse", d1}, {"fine", d2}});
    double mid = numeric::expansion_factor(f, 0.125, 1e-7, cfg);
    r.check("gap midpoint expansion finite", std::isfinite(mid), {{"factor", mid}});
    auto cones = numeric::cone_field(f, {0.001, 0.005, 0.01, 0.125, 0.251, 0.3}, cfg);
    bool cones_ok = !cones.empty();
    json cj = json::array();
    for (const auto& c : cones) {
        cones_ok = cones_ok && c.excludes_stable;
        cj.push_back({{"x", c.x}, {"direction", {c.unstable.x(), c.unstable.y()}}, {"half_angle", c.half_angle}});
    }
    r.check("unstable cones exclude the stable direction", cones_ok, cj);
    r.body["expansion"] = {{"lambda", lambdas}, {"d", d1}, {"midpoint", mid}};

    std::string csv = "entrance_param,exit_param,transit_time,expansion_factor\n";
    for (int j = 0; j < samples; ++j) {
        double x = double(j) / samples;
        auto c = numeric::crossing_map(f, x, cfg);
        if (c.timeout) {
            csv += fmt_num(x) + ",timeout," + fmt_num(c.transit_time) + ",\n";
            continue;
        }
        double e = numeric::expansion_factor(f, x, 1e-7, cfg);
        csv += fmt_num(x) + "," + fmt_num(c.exit_param) + "," + fmt_num(c.transit_time) + "," + fmt_num(e) + "\n";
    }
    r.exports["section8_crossing.csv"] = csv;
    r.exports["section8_phase.svg"] = section8_svg(f, ref);
}

inline void pipeline_da_local(Report& r, const Params& p) {
    allow_params(p, "da_local", {"lambda", "mu", "eta"});
    numeric::LocalDAField f;
    f.lambda = param_double(p, "lambda", -1);
    f.mu = param_double(p, "mu", 1);
    f.eta = param_double(p, "eta", 0.5);
    try {
        f.check();
    } catch (const PreconditionViolation& e) {
        throw MalformedInput(e.what());
    }
    auto planar = [](numeric::LocalDAField g) {
        return numeric::Planar([g](const Eigen::Vector2d& x) { return g.transverse(x); });
    };
    numeric::LocalDAField on = f, off = f;
    on.active = true;
    off.active = false;
    auto eo = numeric::equilibrium_multipliers(planar(on), {0, 0});
    std::array<double, 2> expect = {std::min(f.lambda, -f.mu), std::max(f.lambda, -f.mu)};
    bool origin = std::fabs(eo[0].real() - expect[0]) <= 1e-6 && std::fabs(eo[1].real() - expect[1]) <= 1e-6 &&
                  std::fabs(eo[0].imag()) + std::fabs(eo[1].imag()) <= 1e-6;
    r.check("active origin eigenvalues {lambda,-mu}", origin,
            {{"computed", {eo[0].real(), eo[1].real()}}, {"expected", expect}});
    auto ef = numeric::equilibrium_multipliers(planar(off), {0, 0});
    r.check("inactive origin eigenvalue signs", ef[0].real() < 0 && ef[1].real() > 0,
            {{"computed", {ef[0].real(), ef[1].real()}}});
    double u = numeric::da_saddle_ordinate(on);
    double delta = numeric::da_delta();
    r.check("saddle ordinate sqrt(1-2^-1/2)", std::fabs(u - delta) <= 1e-6, {{"computed", u}, {"expected", delta}});
    json saddles = json::array();
    bool saddle_ok = true;
    for (double sgn : {1.0, -1.0}) {
        auto es = numeric::equilibrium_multipliers(planar(on), {0, sgn * f.eta * u});
        saddle_ok = saddle_ok && es[0].real() < 0 && es[1].real() > 0;
        saddles.push_back({{"y", sgn * f.eta * u}, {"eigenvalues", {es[0].real(), es[1].real()}}});
    }
    r.check("companion equilibria are saddles", saddle_ok, saddles);
    double order = numeric::rk4_empirical_order(off, {0.5, 0.01, 0}, 2.0, 0.1);
    r.check("RK4 empirical order in [3.8,4.2]", order >= 3.8 && order <= 4.2, {{"order", order}});
    numeric::Field fld = [&](const numeric::State& s) { return on(s); };
    numeric::IntegrateOptions o;
    o.keep_states = false;
    auto tr = numeric::integrate(fld, {0.9, 0.0, 0.0}, 3.0, 0.01, o);
    r.check("x-axis invariant", tr.event_state[1] == 0.0, {{"y_final", tr.event_state[1]}});
    double margin = std::min(std::fabs(eo[0].real()), std::fabs(eo[1].real()));
    r.body["hyperbolicity_margin"] = margin;

    std::string csv = "h,terminal_error\n";
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        numeric::Field lin = [&](const numeric::State& s) { return off(s); };
        auto t = numeric::integrate(lin, {0.5, 0.01, 0}, 2.0, h, o);
        auto ex = numeric::da_linear_solution(off, {0.5, 0.01, 0}, 2.0);
        double e = 0;
        for (int i = 0; i < 3; ++i) e = std::max(e, std::fabs(t.event_state[i] - ex[i]));
        csv += fmt_num(h) + "," + fmt_num(e) + "\n";
    }
    r.exports["da_rk4_errors.csv"] = csv;
}

inline void pipeline_traintrack(Report& r, const Params& p) {
    allow_params(p, "traintrack", {"file", "weights"});
    bool companion = !p.count("file");
    TrainTrack t = companion ? companion_chart_track() : parse_train_track(read_file(p.at("file")));
    t.validate();
    bool rec = is_recurrent(t);
    auto m = positive_measure(t);
    r.body["track"] = {{"switches", t.switches.size()}, {"branches", t.branches.size()}, {"recurrent", rec}};
    r.check("positive measure iff recurrent", rec == m.has_value(), {{"recurrent", rec}, {"measure", m.has_value()}});
    if (m) {
        json w = json::object();
        for (std::size_t i = 0; i < t.branches.size(); ++i) w[t.branches[i].id] = to_string(m->weights[i]);
        r.body["measure"] = w;
        r.check("measure satisfies switch conditions", satisfies_switch_conditions(t, *m) && m->positive());
        json cyc = json::array();
        for (const auto& c : cycle_decomposition(t, *m)) cyc.push_back({{"path", c.branches}, {"weight", c.weight}});
        r.body["cycle_decomposition"] = cyc;
        r.exports["measure.txt"] = format_measure(t, *m);
    }
    std::string given = param(p, "weights", companion ? "a=1,b=1,c=1,d=1,e=2" : "");
    if (!given.empty()) {
        Measure g;
        g.weights.assign(t.branches.size(), Rational(0));
        for (const auto& kv : split(given, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw MalformedInput("weights must read branch=value");
            g.weights[t.branch_index(kv.substr(0, eq))] = parse_rational(kv.substr(eq + 1));
        }
        r.check("given weights are a positive measure", satisfies_switch_conditions(t, g) && g.positive(),
                {{"weights", given}});
    }
}

inline const std::vector<std::string>& pipeline_names() {
    static const std::vector<std::string> names = {"both_flows", "richer",         "attractors",       "embed",
                                                   "n_flows",    "infinite_tori", "section8_numeric", "da_local",
                                                   "traintrack"};
    return names;
}

inline Report named_pipeline(const std::string& name, const Params& p = {}) {
    Report r;
    r.body["source"] = {{"kind", "pipeline"}, {"name", name}, {"params", p}};
    if (name == "both_flows") {
        allow_params(p, name, {});
        pipeline_both_flows(r);
    } else if (name == "richer") {
        allow_params(p, name, {});
        pipeline_richer(r);
    } else if (name == "attractors") {
        pipeline_attractors(r, p);
    } else if (name == "embed") {
        pipeline_embed(r, p);
    } else if (name == "n_flows") {
        pipeline_n_flows(r, p);
    } else if (name == "infinite_tori") {
        pipeline_infinite_tori(r, p);
    } else if (name == "section8_numeric") {
        pipeline_section8_numeric(r, p);
    } else if (name == "da_local") {
        pipeline_da_local(r, p);
    } else if (name == "traintrack") {
        pipeline_traintrack(r, p);
    } else {
        throw MalformedInput("unknown pipeline " + name);
    }
    return r;
}

// ---- construction scripts ----

struct PlugOp {
    std::string da_orbit, da_piece;
    DADirection direction = DADirection::Attracting;
    Multipliers multipliers = Multipliers::Positive;
    bool reverse = false;
};

struct PlugDecl {
    std::string id, kind;
    Params params;
    std::vector<PlugOp> ops;
};

struct GluingDecl {
    std::string exit, entrance;
    std::string map = "explicit";  // explicit | coherent | phik
    Mat2 matrix;
    Rational sx{0}, sy{0};
    int n = 1, k = 1;
};

struct CheckDecl {
    std::string check;
    std::string torus;
    std::size_t index = 0;
    json expect;
};

struct PipelineDecl {
    std::string name;
    Params params;
};

struct Script {
    std::string name;
    std::vector<PlugDecl> plugs;
    std::vector<GluingDecl> gluings;
    std::vector<PipelineDecl> pipelines;
    std::vector<CheckDecl> checks;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + " column " + std::to_string(col);
}

inline void only_keys(const json& j, const std::string& where, std::set<std::string> keys) {
    if (!j.is_object()) throw MalformedInput(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw MalformedInput(where + ": unknown key " + k);
}

inline std::string get_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string()) throw MalformedInput(where + ": missing string " + key);
    return j[key].get<std::string>();
}

inline Params to_params(const json& j, const std::string& where) {
    Params p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw MalformedInput(where + ": params must be an object");
    for (const auto& [k, v] : j.items()) {
        if (v.is_string())
            p[k] = v.get<std::string>();
        else if (v.is_number_integer())
            p[k] = std::to_string(v.get<std::int64_t>());
        else if (v.is_number())
            p[k] = fmt_num(v.get<double>());
        else if (v.is_array()) {
            std::string s;
            for (const auto& x : v) {
                if (!s.empty()) s += ",";
                s += x.is_string() ? x.get<std::string>() : x.dump();
            }
            p[k] = s;
        } else {
            throw MalformedInput(where + ": parameter " + k + " must be a string, number or list");
        }
    }
    return p;
}

inline Rational json_rational(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw MalformedInput(where + ": shift entries must be integers or \"p/q\" strings");
}

}  // namespace detail

inline Script parse_script(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MalformedInput("script parse error at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                             e.what());
    }
    using detail::get_string;
    detail::only_keys(j, "script", {"name", "plugs", "gluings", "pipelines", "checks", "comment"});
    Script s;
    s.name = j.value("name", std::string("script"));
    for (const auto& pj : j.value("plugs", json::array())) {
        detail::only_keys(pj, "plug", {"id", "kind", "params", "ops"});
        PlugDecl d;
        d.id = get_string(pj, "id", "plug");
        d.kind = get_string(pj, "kind", "plug " + d.id);
        d.params = detail::to_params(pj.value("params", json()), "plug " + d.id);
        for (const auto& oj : pj.value("ops", json::array())) {
            detail::only_keys(oj, "plug " + d.id + " op", {"da", "piece", "direction", "multipliers", "reverse"});
            PlugOp op;
            if (oj.contains("reverse")) {
                op.reverse = oj["reverse"].get<bool>();
            } else {
                op.da_orbit = get_string(oj, "da", "plug " + d.id + " op");
                op.da_piece = oj.value("piece", std::string());
                std::string dir = oj.value("direction", std::string("attracting"));
                if (dir != "attracting" && dir != "repelling") throw MalformedInput("direction must be attracting or repelling");
                op.direction = dir == "attracting" ? DADirection::Attracting : DADirection::Repelling;
                std::string mul = oj.value("multipliers", std::string("positive"));
                if (mul != "positive" && mul != "negative") throw MalformedInput("multipliers must be positive or negative");
                op.multipliers = mul == "positive" ? Multipliers::Positive : Multipliers::Negative;
            }
            d.ops.push_back(op);
        }
        for (const auto& o : s.plugs)
            if (o.id == d.id) throw MalformedInput("duplicate plug id " + d.id);
        s.plugs.push_back(d);
    }
    for (const auto& gj : j.value("gluings", json::array())) {
        detail::only_keys(gj, "gluing", {"exit", "entrance", "map", "matrix", "shift", "n", "k"});
        GluingDecl g;
        g.exit = get_string(gj, "exit", "gluing");
        g.entrance = get_string(gj, "entrance", "gluing");
        g.map = gj.value("map", std::string("explicit"));
        std::string where = "gluing " + g.exit + " -> " + g.entrance;
        if (g.map == "explicit") {
            const auto& m = gj.value("matrix", json::array({json::array({1, 0}), json::array({0, 1})}));
            if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
                m[1].size() != 2)
                throw MalformedInput(where + ": matrix must be 2x2");
            g.matrix = {m[0][0].get<std::int64_t>(), m[0][1].get<std::int64_t>(), m[1][0].get<std::int64_t>(),
                        m[1][1].get<std::int64_t>()};
            if (g.matrix.det() != 1) throw MalformedInput(where + ": matrix must have determinant 1");
            const auto& sh = gj.value("shift", json::array({0, 0}));
            if (!sh.is_array() || sh.size() != 2) throw MalformedInput(where + ": shift must have two entries");
            g.sx = detail::json_rational(sh[0], where);
            g.sy = detail::json_rational(sh[1], where);
        } else if (g.map == "phik") {
            g.n = gj.value("n", 1);
            g.k = gj.value("k", 1);
        } else if (g.map != "coherent") {
            throw MalformedInput(where + ": map must be explicit, coherent or phik");
        }
        s.gluings.push_back(g);
    }
    for (const auto& pj : j.value("pipelines", json::array())) {
        detail::only_keys(pj, "pipeline", {"name", "params"});
        PipelineDecl d{get_string(pj, "name", "pipeline"), detail::to_params(pj.value("params", json()), "pipeline")};
        if (std::find(pipeline_names().begin(), pipeline_names().end(), d.name) == pipeline_names().end())
            throw MalformedInput("unknown pipeline " + d.name);
        s.pipelines.push_back(d);
    }
    for (const auto& cj : j.value("checks", json::array())) {
        detail::only_keys(cj, "check", {"check", "torus", "index", "expect"});
        CheckDecl c;
        c.check = get_string(cj, "check", "check");
        c.torus = cj.value("torus", std::string());
        c.index = cj.value("index", std::size_t(0));
        if (!cj.contains("expect")) throw MalformedInput("check " + c.check + " needs expect");
        c.expect = cj["expect"];
        static const std::set<std::string> kinds = {"transitive", "status", "closed", "leaves", "type",
                                                    "incoherent", "filling", "strong", "pipeline"};
        if (!kinds.count(c.check)) throw MalformedInput("unknown check " + c.check);
        s.checks.push_back(c);
    }
    return s;
}

inline Plug build_decl(const PlugDecl& d) {
    Plug p;
    if (d.kind == "M1") {
        allow_params(d.params, "plug " + d.id, {"n"});
        p = instantiate(build_m1(param_int(d.params, "n", 1)), d.id);
    } else if (d.kind == "attractor") {
        allow_params(d.params, "plug " + d.id, {"sigma"});
        std::vector<SignWord> w;
        for (const auto& x : split(param(d.params, "sigma", "+"), ',')) w.push_back(SignWord::parse(x));
        p = realize_attractor(w, d.id);
    } else if (d.kind == "section8_doubled") {
        allow_params(d.params, "plug " + d.id, {});
        p = section8_doubled(d.id);
    } else {
        allow_params(d.params, "plug " + d.id, {"n", "exit_leaves", "transitive", "label"});
        CatalogParams cp;
        cp.n = param_int(d.params, "n", 1);
        if (d.params.count("exit_leaves"))
            for (const auto& x : split(d.params.at("exit_leaves"), ','))
                cp.exit_leaves.push_back(param_int({{"v", x}}, "v", 0));
        cp.transitive = param(d.params, "transitive", "true") != "false";
        cp.label = param(d.params, "label", "");
        p = catalog(d.kind, d.id, cp);
    }
    for (const auto& op : d.ops) {
        if (op.reverse) {
            p = reverse(p);
            continue;
        }
        std::string piece = op.da_piece.empty() ? nontrivial_piece(p) : d.id + "." + op.da_piece;
        p = da_bifurcation(p, {{piece, op.da_orbit}, op.direction, op.multipliers});
    }
    return p;
}

inline Report run_script_text(const std::string& text) {
    Script s = parse_script(text);
    Report r;
    r.body["source"] = {{"kind", "script"}, {"name", s.name}};
    r.body["plugs"] = json::array();

    // plugs and references resolve before anything is reported
    std::vector<Plug> plugs;
    for (const auto& d : s.plugs) {
        try {
            plugs.push_back(build_decl(d));
        } catch (const PreconditionViolation& e) {
            throw MalformedInput("plug " + d.id + ": " + e.what());
        }
    }
    std::map<std::string, Side> sides;
    for (const auto& p : plugs)
        for (const auto* side : {&p.entrance, &p.exit})
            for (const auto& t : *side) sides[t.id] = t.side;
    std::set<std::string> used;
    for (const auto& g : s.gluings) {
        for (const auto& [ref, want] : {std::pair{g.exit, Side::Exit}, std::pair{g.entrance, Side::Entrance}}) {
            auto it = sides.find(ref);
            if (it == sides.end()) throw MalformedInput("unresolved torus reference " + ref);
            if (it->second != want) throw MalformedInput("torus " + ref + " is on the wrong side");
            if (!used.insert(ref).second) throw MalformedInput("torus " + ref + " glued twice");
        }
    }
    for (const auto& c : s.checks)
        if (!c.torus.empty() && !sides.count(c.torus)) throw MalformedInput("check refers to unknown torus " + c.torus);

    for (const auto& p : plugs) r.body["plugs"].push_back(plug_json(p));

    std::optional<ClosedModel> model;
    std::optional<Plug> whole;
    if (!plugs.empty()) {
        Plug u = plugs[0];
        for (std::size_t i = 1; i < plugs.size(); ++i) u = disjoint_union(u, plugs[i], u.id + "+" + plugs[i].id);
        u.id = s.name;
        whole = u;
    }
    if (whole && !s.gluings.empty()) {
        GluingSpec spec;
        for (const auto& g : s.gluings) {
            TorusMap m;
            if (g.map == "coherent")
                m = coherent_gluing(whole->torus(g.exit).lamination, whole->torus(g.entrance).lamination);
            else if (g.map == "phik")
                m = phik_gluing(g.n, g.k);
            else
                m = TorusMap(g.matrix, g.sx, g.sy);
            spec.pairs.push_back({g.exit, g.entrance, m, std::nullopt});
        }
        try {
            model = self_glue(*whole, spec, s.name);
            r.check("gluing", true);
        } catch (const std::exception& e) {
            // certificate failures and obstructions become a failed check
            json certs = json::array();
            for (const auto& pr : spec.pairs) {
                GluingPair c = pr;
                try {
                    c.cert = certify_pair(whole->torus(pr.exit).lamination, pr.map, whole->torus(pr.entrance).lamination);
                } catch (const std::exception&) {
                }
                certs.push_back(certificate_json(c));
            }
            r.body["certificates"] = certs;
            r.check("gluing", false, {{"error", e.what()}});
        }
    }
    if (model) {
        r.body["models"] = {model_json(*model)};
        export_model(r, *model);
    } else if (whole) {
        export_plug(r, *whole);
    }

    auto find_torus = [&](const std::string& id) -> const BoundaryTorus* {
        for (const auto& p : plugs)
            if (auto* t = p.find_torus(id)) return t;
        return nullptr;
    };
    std::vector<Report> sub;
    r.body["pipelines"] = json::array();
    for (const auto& pd : s.pipelines) {
        sub.push_back(named_pipeline(pd.name, pd.params));
        r.body["pipelines"].push_back(sub.back().to_json());
        for (const auto& [f, c] : sub.back().exports) r.exports[pd.name + "/" + f] = c;
    }
    std::map<std::string, int> counter;
    for (const auto& c : s.checks) {
        std::string name = c.check + (c.torus.empty() ? "" : " " + c.torus);
        if (c.check == "strong" || c.check == "pipeline") name += " " + std::to_string(c.index);
        if (counter[name]++) name += " #" + std::to_string(counter[name]);
        json actual;
        bool have = true;
        if (c.check == "pipeline") {
            have = c.index < sub.size();
            if (have) actual = sub[c.index].all_pass();
        } else if (!c.torus.empty()) {
            // boundary tori are read off the input plugs
            const BoundaryTorus* t = find_torus(c.torus);
            const auto& l = t->lamination;
            if (c.check == "leaves") actual = l.n_compact();
            else if (c.check == "type") actual = l.n_compact() ? l.sign_word().str() : "";
            else if (c.check == "incoherent") actual = l.n_compact() ? l.minority_count() : 0;
            else if (c.check == "filling") actual = l.is_filling();
            else have = false;
            // sign words compare up to combinatorial type
            if (c.check == "type" && l.n_compact() && c.expect.is_string()) {
                bool eq = types_equivalent(l.sign_word(), SignWord::parse(c.expect.get<std::string>()));
                r.check(name, eq, {{"actual", actual}, {"expected", c.expect}});
                continue;
            }
        } else if (model) {
            if (c.check == "transitive") actual = model->transitive;
            else if (c.check == "status") actual = to_string(model->status);
            else if (c.check == "closed") actual = model->closed;
            else if (c.check == "strong") {
                have = c.index < model->pairs.size() && model->pairs[c.index].cert.has_value();
                if (have) actual = model->pairs[c.index].cert->strong;
            } else have = false;
        } else {
            have = false;
        }
        if (!have)
            r.check(name, false, {{"error", "nothing to evaluate"}, {"expected", c.expect}});
        else
            r.check(name, actual == c.expect, {{"actual", actual}, {"expected", c.expect}});
    }
    return r;
}

inline Report run_script(const std::string& path) { return run_script_text(read_file(path)); }

// ---- rendering ----

inline std::string render_text(const json& rep) {
    std::string s;
    const auto& src = rep.value("source", json::object());
    s += "source: " + src.value("kind", std::string("?")) + " " + src.value("name", std::string("?")) + "\n";
    for (const auto& m : rep.value("models", json::array()))
        s += "model " + m.value("id", std::string()) + ": status=" + m.value("status", std::string()) +
             " transitive=" + (m.value("transitive", false) ? "true" : "false") +
             " closed=" + (m.value("closed", false) ? "true" : "false") + "\n";
    for (const auto& p : rep.value("plugs", json::array()))
        for (const auto& t : p.value("tori", json::array()))
            s += "torus " + t.value("id", std::string()) + " " + t.value("side", std::string()) +
                 " leaves=" + std::to_string(t.value("leaves", 0)) + " word=" + t.value("sign_word", std::string("-")) +
                 "\n";
    for (const auto& c : rep.value("checks", json::array()))
        s += std::string(c.value("pass", false) ? "PASS " : "FAIL ") + c.value("name", std::string()) + "  " +
             c.value("evidence", json::object()).dump() + "\n";
    s += std::string("overall: ") + (rep.value("all_pass", false) ? "pass" : "fail") + "\n";
    return s;
}

inline std::string extension(const std::string& f) {
    if (f.size() >= 8 && f.compare(f.size() - 8, 8, ".lam.txt") == 0) return "text";
    auto d = f.rfind('.');
    return d == std::string::npos ? "" : f.substr(d + 1);
}

}  // namespace anosov::report
