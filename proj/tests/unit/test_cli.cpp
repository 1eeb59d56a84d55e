#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tcw/cli.hpp"
#include "tcw/pes_text.hpp"

using namespace tcw;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream o, e;
    int c = run_cli(args, o, e);
    return {c, o.str(), e.str()};
}

std::string fx(const char* n) { return std::string(TCW_FIXTURE_DIR) + "/" + n + ".pes"; }

nlohmann::json strip_timing(const std::string& s)
{
    auto j = nlohmann::json::parse(s);
    j.erase("timing_ms");
    return j;
}

} // namespace

TEST_CASE("spectrum json")
{
    Run r = run({"spectrum", fx("e6"), fx("e7"), "--json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["v"] == 1);
    CHECK(j["bisim"] == true);
    CHECK(j["step"] == false);
    CHECK(j["pomset"] == false);
    CHECK(j["hp"] == false);
    CHECK(j["hhp"] == false);
}

TEST_CASE("check")
{
    Run r = run({"--json", "check", "--model", fx("e1"), "--formula", "ex {}{} < b x . T"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["verdict"] == true);
    Run open = run({"check", "--model", fx("e1"), "--formula", "run x . T"});
    CHECK(open.code == 2);
    Run bound = run({"check", "--model", fx("e1"), "--formula", "run x . T", "--bind", "x=a0", "--json"});
    CHECK(bound.code == 0);
    CHECK(nlohmann::json::parse(bound.out)["verdict"] == true);
    Run cfg = run({"check", "--model", fx("e1"), "--formula", "ex! {}{} < b x . T", "--config", "a0", "--json"});
    CHECK(nlohmann::json::parse(cfg.out)["verdict"] == true);
    Run notcfg = run({"check", "--model", fx("e1"), "--formula", "T", "--config", "b1"});
    CHECK(notcfg.code == 3);
}

TEST_CASE("exit codes")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"classify", "ex {} < a"}).code == 3);
    Run bad = run({"classify", "ex {} < a", "--json"});
    auto j = nlohmann::json::parse(bad.out);
    CHECK(j["error"]["kind"] == "SyntaxError");
    CHECK(j["error"].contains("line"));
    CHECK(run({"compile", "a | (b"}).code == 3);
    CHECK(run({"--limit", "2", "configs", fx("p")}).code == 4);
    CHECK(run({"distinguish", "--frag", "hhp", fx("p"), fx("q")}).code == 0);
}

TEST_CASE("deterministic json")
{
    for (std::vector<std::string> args : {
             std::vector<std::string>{"equiv", "--rel", "hhp", fx("p"), fx("q"), "--json"},
             std::vector<std::string>{"distinguish", "--frag", "hp", fx("pomset_left"), fx("pomset_right"), "--json"},
             std::vector<std::string>{"configs", fx("e3"), "--mode", "step", "--json"},
             std::vector<std::string>{"spectrum", fx("e7"), fx("e9"), "--json", "--seed", "5"},
         }) {
        Run a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(strip_timing(a.out) == strip_timing(b.out));
        auto j = nlohmann::json::parse(a.out);
        CHECK(nlohmann::json::parse(j.dump()) == j);
    }
}

TEST_CASE("compile then validate round trip")
{
    auto dir = std::filesystem::temp_directory_path() / "tcw_cli_test";
    std::filesystem::create_directories(dir);
    std::string path = (dir / "p.pes").string();
    Run c = run({"compile", "a | (b + c) + a | b", "-o", path, "--name", "P"});
    CHECK(c.code == 0);
    Run v = run({"validate", path});
    CHECK(v.code == 0);
    CHECK(parse_pes(v.out) == load_pes_file(path));
    std::string empty = (dir / "empty.pes").string();
    std::ofstream(empty) << "pes Empty { }\n";
    Run e = run({"validate", empty});
    CHECK(e.code == 0);
    CHECK(e.out == "pes Empty {\n}\n");
}
