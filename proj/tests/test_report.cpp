#include <gtest/gtest.h>

#include "anosov/report.hpp"

using namespace anosov;
using namespace anosov::report;

namespace {

std::string error_of(const std::string& script) {
    try {
        run_script_text(script);
    } catch (const MalformedInput& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Report, DuplicateCheckNamesRejected) {
    Report r;
    r.check("a", true);
    EXPECT_THROW(r.check("a", false), ModelError);
    r.check("b", false);
    EXPECT_FALSE(r.all_pass());
    EXPECT_EQ(r.to_json()["checks"].size(), 2u);
}

TEST(Report, PipelinesAreDeterministic) {
    for (const char* name : {"both_flows", "n_flows", "traintrack", "da_local"}) {
        std::string a = named_pipeline(name).to_json().dump(2);
        std::string b = named_pipeline(name).to_json().dump(2);
        EXPECT_EQ(a, b) << name;
    }
}

TEST(Report, NFlowsInvariants) {
    auto r = named_pipeline("n_flows", {{"n", "3"}});
    EXPECT_TRUE(r.all_pass());
    auto j = r.to_json();
    EXPECT_EQ(j["invariants"], json({"{1,7}", "{2,6}", "{3,5}"}));
    EXPECT_EQ(r.exports.count("Z1.dot"), 1u);
}

TEST(Report, AttractorsPipeline) {
    auto r = named_pipeline("attractors", {{"sigma", "+-+"}});
    EXPECT_TRUE(r.all_pass());
    EXPECT_THROW(named_pipeline("attractors", {{"sigma", "-+"}}), MalformedInput);
}

TEST(Report, ParameterErrors) {
    EXPECT_THROW(named_pipeline("nope"), MalformedInput);
    EXPECT_THROW(named_pipeline("n_flows", {{"m", "3"}}), MalformedInput);
    EXPECT_THROW(named_pipeline("n_flows", {{"n", "three"}}), MalformedInput);
    EXPECT_THROW(named_pipeline("traintrack", {{"file", "/nonexistent/x.track"}}), MalformedInput);
}

TEST(Script, ParseErrorsGiveLineAndColumn) {
    std::string e = error_of("{\n  \"name\": \"x\",\n  \"plugs\": [}\n");
    EXPECT_NE(e.find("line 3"), std::string::npos) << e;
    EXPECT_NE(error_of(R"({"plugz": []})").find("plugz"), std::string::npos);
}

TEST(Script, ReferencesResolveBeforeOutput) {
    EXPECT_EQ(error_of(R"({"plugs": [{"id": "W", "kind": "W_pants"}],
                          "gluings": [{"exit": "W.out", "entrance": "W.in9", "map": "coherent"}]})"),
              "unresolved torus reference W.in9");
    EXPECT_EQ(error_of(R"({"plugs": [{"id": "W", "kind": "W_pants"}],
                          "gluings": [{"exit": "W.in1", "entrance": "W.in2", "map": "coherent"}]})"),
              "torus W.in1 is on the wrong side");
    EXPECT_EQ(error_of(R"({"plugs": [{"id": "A", "kind": "W_pants"}, {"id": "A", "kind": "V_twisted"}]})"),
              "duplicate plug id A");
    EXPECT_NE(error_of(R"({"plugs": [{"id": "A", "kind": "mystery"}]})"), "");
}

TEST(Script, ClosesM0X0OnItself) {
    auto r = run_script_text(R"({"name": "loop",
        "plugs": [{"id": "U", "kind": "U_M0X0", "params": {"n": 1}}],
        "gluings": [{"exit": "U.out", "entrance": "U.in", "map": "coherent"}],
        "checks": [{"check": "closed", "expect": true},
                   {"check": "transitive", "expect": true},
                   {"check": "leaves", "torus": "U.in", "expect": 4}]})");
    EXPECT_TRUE(r.all_pass()) << r.to_json().dump(1);
    EXPECT_TRUE(r.exports.count("loop.dot"));
}

TEST(Script, FailedGluingIsAFailedCheck) {
    auto r = run_script_text(R"({"plugs": [{"id": "V", "kind": "V_twisted"}, {"id": "U", "kind": "U_M0X0"}],
        "gluings": [{"exit": "V.out", "entrance": "U.in", "shift": ["0", "0"]}]})");
    EXPECT_FALSE(r.all_pass());
    auto j = r.to_json();
    EXPECT_EQ(j["checks"][0]["name"], "gluing");
    EXPECT_EQ(j["certificates"].size(), 1u);
}

TEST(Script, MissingThingsToCheckFail) {
    auto r = run_script_text(R"({"checks": [{"check": "transitive", "expect": true}]})");
    EXPECT_FALSE(r.all_pass());
}

TEST(Render, TextSummary) {
    auto r = named_pipeline("both_flows");
    std::string t = render_text(r.to_json());
    EXPECT_NE(t.find("overall: pass"), std::string::npos);
    EXPECT_EQ(extension("a.lam.txt"), "text");
    EXPECT_EQ(extension("a.dot"), "dot");
}
