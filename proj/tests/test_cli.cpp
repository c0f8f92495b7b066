#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "superint/catalog/catalog.hpp"
#include "superint/cli/cli.hpp"

using namespace superint;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expect = 0) {
    args.push_back("--format");
    args.push_back("json");
    auto r = run(args);
    INFO(r.err);
    CHECK(r.code == expect);
    return json::parse(r.out);
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

std::string corrupted_catalog() {
    std::string path = "test_cli_corrupted.json";
    catalog::Catalog bad;
    for (auto e : catalog::default_catalog().entries()) {
        if (e.id == "q-b3") e.pair.f[1] = e.pair.f[1] + sym::Expr(1);
        bad.add(e);
    }
    std::ofstream(path) << bad.to_json().dump();
    return path;
}

}  // namespace

TEST_CASE("derive prints the first Painleve condition") {
    auto r = run({"derive", "--mechanics", "quantum", "--type", "b", "--order", "3"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "-4*i*alpha1*x/hbar^3 - 6*V(x)^2/hbar^2 + V''(x) = 0"));
    CHECK(contains(r.out, "first Painleve equation"));
    auto j = run_json({"solve", "--mechanics", "quantum", "--type", "a", "--order", "5"});
    CHECK(j["branches"][0]["condition"] ==
          "-20*V(x)*V''(x)/hbar^2 - 10*V'(x)^2/hbar^2 + 40*V(x)^3/hbar^4 + V{4}(x)");
}

TEST_CASE("verify an entry") {
    CHECK(run({"verify", "--entry", "q-c2"}).code == 0);
    auto j = run_json({"verify", "--entry", "q-d1", "--entry", "c-b3"});
    CHECK(j["verified"] == true);
    CHECK(j["reports"].size() == 2);
}

TEST_CASE("compose with check prints K") {
    auto r = run({"compose", "--case", "dd", "--x", "q-d1", "--y", "q-d1", "--m", "2", "--n", "1", "--check"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "K = "));
    CHECK(contains(r.out, "[H,K] = 0: yes"));
    auto j = run_json({"check", "--case", "DD", "--x", "q-d1", "--y", "q-d1", "--m", "3", "--n", "2"});
    CHECK(j["superintegrable"]["independent"] == true);
    CHECK(j["order"] == 4);
}

TEST_CASE("algebra of the harmonic DD row") {
    auto j = run_json({"algebra", "--case", "dd", "--x", "q-d1", "--y", "q-d1"});
    CHECK(j["template_match"] == true);
    CHECK(j["fitted"]["4lambda^2"] == "4*alpha^2");
}

TEST_CASE("painleve verdict for the d5 equation") {
    auto j = run_json({"painleve", "--entry", "q-d5"});
    CHECK(j["verdict"] == "passes");
    CHECK(j["branches"][0]["p"] == "-1");
    CHECK(j["branches"][0]["d0"] == "-hbar^2");
    CHECK(j["branches"][0]["resonances"] == json({-1, 1, 2, 5, 6, 8}));
    CHECK(run({"painleve", "--equation", "V''(x) - 6*V(x)^2 - x", "--expect", "passes"}).code == 0);
    CHECK(run({"painleve", "--equation", "V''(x) - V(x)^5", "--expect", "passes"}).code == 1);
}

TEST_CASE("numcheck") {
    CHECK(run({"numcheck", "--entry", "q-d1"}).code == 0);
    auto j = run_json({"numcheck", "--entry", "q-d3", "--tol", "1e-12"});
    CHECK(j["via"] == "q-d3-p4");
    CHECK(j["residual"]["max_abs"].get<double>() <= 1e-6);
    CHECK(run({"numcheck", "--entry", "c-d2", "--param", "k=1/2"}).code == 0);
}

TEST_CASE("usage errors name the flag and exit 2") {
    auto bad = [](std::vector<std::string> a, const std::string& flag) {
        auto r = run(a);
        INFO(r.err);
        CHECK(r.code == 2);
        CHECK(contains(r.err, flag));
    };
    bad({"derive", "--mechanics", "quantum", "--type", "b", "--order", "0"}, "--order");
    bad({"derive", "--mechanics", "quantal", "--type", "b", "--order", "3"}, "--mechanics");
    bad({"verify", "--entry", "q-z9"}, "--entry");
    bad({"numcheck", "--entry", "q-d1", "--param", "zeta=1"}, "--param");
    bad({"numcheck", "--entry", "q-d1", "--param", "alpha1=abc"}, "--param");
    bad({"numcheck", "--entry", "q-d1", "--tol", "0"}, "--tol");
    bad({"numcheck", "--entry", "q-d3", "--window", "2,1"}, "--window");
    bad({"compose", "--case", "dd", "--x", "q-d1", "--y", "q-d1", "--m", "2", "--n", "2"}, "--m");
    bad({"compose", "--case", "dd", "--x", "q-a2", "--y", "q-d1"}, "--case");
    bad({"list", "--format", "yaml"}, "--format");
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("a failed verification exits 1 with its residual") {
    std::string path = corrupted_catalog();
    auto j = run_json({"verify", "--entry", "q-b3", "--catalog", path}, 1);
    CHECK(j["verified"] == false);
    CHECK(!j["reports"][0]["residual"].empty());
    setenv("SUPERINT_CATALOG", path.c_str(), 1);
    CHECK(run({"verify", "--entry", "q-b3"}).code == 1);
    unsetenv("SUPERINT_CATALOG");
    CHECK(run({"verify", "--entry", "q-b3"}).code == 0);
    std::remove(path.c_str());
}

TEST_CASE("a JSON report re-ingested gives the same verdicts") {
    std::string path = "test_cli_report.json";
    auto first = run({"verify", "--all", "--format", "json", "--output", path});
    CHECK(first.code == 0);
    auto again = run_json({"verify", "--report", path});
    CHECK(again["agrees_with_report"] == true);
    std::ifstream in(path);
    json stored = json::parse(in);
    CHECK(again["reports"] == stored["reports"]);

    // a failing verdict survives the round trip too
    std::string bad = corrupted_catalog();
    run({"verify", "--entry", "q-b3", "--catalog", bad, "--format", "json", "--output", path});
    auto j = run_json({"verify", "--report", path}, 1);
    CHECK(j["agrees_with_report"] == true);
    CHECK(j["verified"] == false);
    std::remove(path.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("reports are bit-stable") {
    std::vector<std::vector<std::string>> cmds = {
        {"list", "--sub-entries", "--families", "--format", "json"},
        {"compose", "--case", "dd", "--x", "q-d1", "--y", "q-d2", "--check", "--format", "json"},
        {"verify", "--all", "--format", "json"},
        {"numcheck", "--entry", "c-a3", "--format", "json"},
    };
    for (const auto& c : cmds) {
        auto a = run(c), b = run(c);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("list filters") {
    auto j = run_json({"list", "--mechanics", "classical", "--type", "d"});
    std::vector<std::string> ids;
    for (const auto& e : j["entries"]) ids.push_back(e["id"]);
    CHECK(ids == std::vector<std::string>{"c-d1", "c-d2", "c-d3", "c-d4", "c-d5"});
}
