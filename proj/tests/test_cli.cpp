#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using Json = nlohmann::ordered_json;

namespace {

// compile definitions from the build, overridable from the environment
std::string cli_path() {
    if (const char* p = std::getenv("IBT_CLI_PATH")) return p;
#ifdef IBT_CLI_PATH
    return IBT_CLI_PATH;
#else
    FAIL("IBT_CLI_PATH not set");
    return "";
#endif
}

std::string fixture_dir() {
    if (const char* p = std::getenv("IBT_FIXTURE_DIR")) return p;
#ifdef IBT_FIXTURE_DIR
    return IBT_FIXTURE_DIR;
#else
    FAIL("IBT_FIXTURE_DIR not set");
    return "";
#endif
}

// run the binary from the fixture directory, capture stdout, return exit code
int run_cli(const std::string& args, std::string& out, bool merge_stderr = false) {
    std::string cmd = "cd '" + fixture_dir() + "' && '" + cli_path() + "' " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    out.clear();
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int status = pclose(f);
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("slopes subcommand reports the newton point") {
    std::string out;
    int rc = run_cli("slopes --input std_half.json", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["kind"] == "slopes");
    CHECK(j["slopes"].dump() == R"([{"num":1,"den":2,"mult":2}])");
    CHECK(j["decomposable"] == true);
    CHECK(j["config"]["prime"] == 3);
    CHECK(j["config"]["precision"] == 40);
}

TEST_CASE("decompose lists one summand per slope") {
    std::string out;
    int rc = run_cli("decompose --input zero_half.json", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    REQUIRE(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["slope"] == "0");
    CHECK(j["blocks"][0]["mult"] == 1);
    CHECK(j["blocks"][1]["slope"] == "1/2");
    CHECK(j["blocks"][1]["mult"] == 2);
}

TEST_CASE("decent reports the descent exponent") {
    std::string out;
    int rc = run_cli("decent --input std_half.json", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    CHECK(j["s"] == 2);
    CHECK(j["decent"] == true);
}

TEST_CASE("min-check evaluates the supplied norm") {
    std::string out;
    int rc = run_cli("min-check --input min_check.json", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    CHECK(j["in_min"] == true);
    CHECK(j["displacement2"] == j["min_nu2"]);
}

TEST_CASE("min-point builds a certified minimizer") {
    std::string out;
    int rc = run_cli("min-point --input min_point.json", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    CHECK(j["in_min"] == true);
    CHECK(j["norm"]["exponents"][0] == "1/2");
    CHECK(j["norm"]["exponents"][1] == "1");
    CHECK(j["displacement2"] == "1/2");
}

TEST_CASE("scan output is deterministic for a fixed seed") {
    std::string a, b;
    CHECK(run_cli("scan --input std_half.json --samples 15 --seed 9", a) == 0);
    CHECK(run_cli("scan --input std_half.json --samples 15 --seed 9", b) == 0);
    CHECK(a == b);
    Json j = Json::parse(a);
    CHECK(j["pass"] == true);
    CHECK(j["samples"] == 15);
    CHECK(j["records"].size() == 15);
    std::string c;
    CHECK(run_cli("scan --input std_half.json --samples 15 --seed 10", c) == 0);
    CHECK(a != c);
}

TEST_CASE("config files mirror command line flags") {
    std::string flags, conf;
    CHECK(run_cli("scan --input std_half.json --samples 12 --seed 7", flags) == 0);
    CHECK(run_cli("scan --config run.toml", conf) == 0);
    CHECK(flags == conf);
}

TEST_CASE("crystals enumerates and connects the stable lattices") {
    std::string out;
    int rc = run_cli("crystals --input std_half.json --radius 1", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    REQUIRE(j["crystals"].size() == 5);
    for (const auto& c : j["crystals"]) CHECK(c["minimal"] == true);
    REQUIRE(j["witnesses"].size() == 4);
    for (const auto& w : j["witnesses"]) CHECK_FALSE(w["g"].is_null());
}

TEST_CASE("verify runs a named suite") {
    std::string out;
    int rc = run_cli("verify --input std_half.json --suite prop1 --seed 3", out);
    CHECK(rc == 0);
    Json j = Json::parse(out);
    CHECK(j["suite"] == "prop1");
    CHECK(j["pass"] == true);
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("malformed input exits with the input error code") {
    std::string out;
    CHECK(run_cli("slopes --input bad.json", out, true) == 2);
    CHECK(out.find("InvalidParams") != std::string::npos);
    CHECK(run_cli("slopes --input does_not_exist.json", out, true) == 2);
    CHECK(run_cli("verify --input std_half.json --suite nope", out, true) == 2);
    CHECK(out.find("UnknownSuite") != std::string::npos);
    CHECK(run_cli("slopes", out, true) == 2);
    CHECK(run_cli("", out, true) == 2);
}

TEST_CASE("precision exhaustion exits with the precision code") {
    std::string out;
    CHECK(run_cli("slopes --input nearzero.json", out, true) == 3);
    CHECK(out.find("PrecisionExhausted") != std::string::npos);
}

TEST_CASE("prime and degree overrides rebuild the instance") {
    std::string out;
    CHECK(run_cli("slopes --input std_half.json --prime 5", out) == 0);
    Json j = Json::parse(out);
    CHECK(j["config"]["prime"] == 5);
    CHECK(j["slopes"][0]["den"] == 2);

    CHECK(run_cli("decent --input diag01.json --degree 2", out) == 0);
    Json j2 = Json::parse(out);
    CHECK(j2["config"]["degree"] == 2);
    CHECK(j2["decent"] == true);
}

TEST_CASE("reports can be written to a file") {
    std::string out;
    std::string target = fixture_dir() + "/tmp_report.json";
    std::remove(target.c_str());
    CHECK(run_cli("slopes --input std_half.json --output tmp_report.json", out) == 0);
    CHECK(out.empty());
    std::ifstream in(target);
    REQUIRE(in.good());
    Json j = Json::parse(in);
    CHECK(j["kind"] == "slopes");
    in.close();
    std::string direct;
    CHECK(run_cli("slopes --input std_half.json", direct) == 0);
    std::ifstream in2(target);
    std::string fromfile((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(fromfile == direct);
    std::remove(target.c_str());
}
