// Command line front end: run scripts, named pipelines, render reports and
// write exports.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "anosov/report.hpp"

namespace fs = std::filesystem;
using namespace anosov;
using namespace anosov::report;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

Params parse_params(const std::vector<std::string>& raw) {
    Params p;
    for (const auto& kv : raw) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw MalformedInput("--param expects key=value, got " + kv);
        p[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return p;
}

void emit(const json& rep, const std::string& format) {
    if (format == "text")
        std::cout << render_text(rep);
    else
        std::cout << rep.dump(2) << "\n";
}

int status_of(const json& rep) { return rep.value("all_pass", false) ? 0 : kExitFail; }

bool is_report(const json& j) { return j.is_object() && j.contains("checks") && j.contains("all_pass"); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plug gluing constructions, pipelines and reports"};
    app.require_subcommand(1);

    std::string format = "json";
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    };

    auto* run = app.add_subcommand("run", "evaluate a construction script");
    std::string script;
    run->add_option("script", script, "script path")->required();
    add_format(run);

    auto* pipe = app.add_subcommand("pipeline", "run a named pipeline");
    std::string name;
    std::vector<std::string> raw_params;
    pipe->add_option("name", name, "pipeline name")->required();
    pipe->add_option("--param", raw_params, "key=value, repeatable");
    add_format(pipe);

    auto* rep = app.add_subcommand("report", "render a script or a saved JSON report");
    std::string source;
    rep->add_option("source", source, "script or report path")->required();
    add_format(rep);

    auto* exp = app.add_subcommand("export", "write DOT, CSV, SVG and lamination records");
    std::string dot_dir, csv_dir, svg_dir, text_dir, exp_script, exp_pipeline;
    std::vector<std::string> exp_params;
    exp->add_option("--dot", dot_dir, "directory for DOT graphs")->expected(0, 1);
    exp->add_option("--csv", csv_dir, "directory for CSV tables")->expected(0, 1);
    exp->add_option("--svg", svg_dir, "directory for SVG drawings")->expected(0, 1);
    exp->add_option("--text", text_dir, "directory for lamination records")->expected(0, 1);
    auto* o_script = exp->add_option("--script", exp_script, "script path");
    auto* o_pipe = exp->add_option("--pipeline", exp_pipeline, "pipeline name");
    o_script->excludes(o_pipe);
    exp->add_option("--param", exp_params, "key=value, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*run) {
            json j = run_script(script).to_json();
            emit(j, format);
            return status_of(j);
        }
        if (*pipe) {
            json j = named_pipeline(name, parse_params(raw_params)).to_json();
            emit(j, format);
            return status_of(j);
        }
        if (*rep) {
            std::string text = read_file(source);
            json j;
            auto parsed = json::parse(text, nullptr, false);
            j = is_report(parsed) ? parsed : run_script_text(text).to_json();
            emit(j, format);
            return status_of(j);
        }
        if (*exp) {
            if (exp_script.empty() == exp_pipeline.empty())
                throw MalformedInput("export needs exactly one of --script and --pipeline");
            Report r = exp_script.empty() ? named_pipeline(exp_pipeline, parse_params(exp_params))
                                          : run_script(exp_script);
            const char* env = std::getenv("ANOSOV_OUT_DIR");
            std::string fallback = env && *env ? env : ".";
            std::map<std::string, std::string> dirs;
            auto want = [&](CLI::Option* o, const std::string& dir, const std::string& ext) {
                if (o->count() > 0) dirs[ext] = dir.empty() ? fallback : dir;
            };
            want(exp->get_option("--dot"), dot_dir, "dot");
            want(exp->get_option("--csv"), csv_dir, "csv");
            want(exp->get_option("--svg"), svg_dir, "svg");
            want(exp->get_option("--text"), text_dir, "text");
            if (dirs.empty())
                for (const auto* e : {"dot", "csv", "svg", "text"}) dirs[e] = fallback;
            std::size_t written = 0;
            for (const auto& [file, content] : r.exports) {
                auto it = dirs.find(extension(file));
                if (it == dirs.end()) continue;
                fs::path path = fs::path(it->second) / file;
                fs::create_directories(path.parent_path());
                std::ofstream(path, std::ios::binary) << content;
                std::cout << path.string() << "\n";
                ++written;
            }
            std::cerr << written << " files written\n";
            return r.all_pass() ? 0 : kExitFail;
        }
    } catch (const MalformedInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
