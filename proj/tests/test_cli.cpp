#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

// End-to-end checks against the installed binary; KREINSTRING_BIN is
// injected by the build.
static const std::string bin = KREINSTRING_BIN;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

RunResult run(const std::string& args) {
    static int seq = 0;
    const std::string tag = "/tmp/krein_cli_" + std::to_string(getpid()) + "_" +
                            std::to_string(seq++);
    const std::string cmd = bin + " " + args + " >" + tag + ".out 2>" + tag + ".err";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(tag + ".out");
    r.err = slurp(tag + ".err");
    std::remove((tag + ".out").c_str());
    std::remove((tag + ".err").c_str());
    return r;
}

const std::string dir = "/tmp/krein_cli_fixtures_" + std::to_string(getpid());

struct Fixtures {
    Fixtures() {
        std::filesystem::create_directories(dir);
        spit(dir + "/homog.json",
             R"({"length":1,"segments":[{"x0":0,"x1":1,"poly":[1]}]})");
        spit(dir + "/atom.json", R"({"length":2,"point_masses":[{"x":1,"m":1}]})");
        spit(dir + "/badkey.json", R"({"len":1})");
        // interlacing broken between the pairs
        spit(dir + "/crossed.json", R"({"L":1,"mu":[1,2],"lambda":[3,4]})");
        // interlaced data, but the claimed tail puts reference nodes below
        // mu_1 — the residues come out nonpositive
        spit(dir + "/badtail.json",
             R"({"L":1,"mu":[1,3,5,7,9,11,13,15,17,19,21,23],)"
             R"("lambda":[2,4,6,8,10,12,14,16,18,20,22,24],)"
             R"("tail":{"class":"quadratic","b":100}})");
    }
} fixtures;

} // namespace

TEST_CASE("spectrum reproduces the uniform string") {
    RunResult r = run("spectrum " + dir + "/homog.json --n-max 5");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["mu"].size() == 5);
    for (int n = 1; n <= 5; ++n) {
        const double mu = M_PI * M_PI * (n - 0.5) * (n - 0.5);
        const double lm = M_PI * M_PI * n * n;
        CHECK(std::fabs(double(j["mu"][n - 1]) - mu) <= 1e-8 * mu);
        CHECK(std::fabs(double(j["lambda"][n - 1]) - lm) <= 1e-8 * lm);
    }
    CHECK(j["truncated"] == true); // a prefix, not the whole spectrum
    CHECK(j["tail"]["class"] == "none");
}

TEST_CASE("spectrum of a finite chain is complete and exact") {
    RunResult r = run("spectrum " + dir + "/atom.json --n-max 5");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["mu"].size() == 1);
    CHECK(double(j["mu"][0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(double(j["lambda"][0]) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["truncated"] == false);
}

TEST_CASE("output is byte-deterministic, on stdout and in files") {
    const std::string args = "spectrum " + dir + "/homog.json --n-max 8";
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.out == b.out);
    const std::string out_file = dir + "/spec_out.json";
    RunResult c = run(args + " --output " + out_file);
    CHECK(c.out.empty());
    CHECK(slurp(out_file) == a.out);
}

TEST_CASE("csv output leads with the header") {
    RunResult r = run("spectrum " + dir + "/homog.json --n-max 3 --format csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("index,mu,lambda\n", 0) == 0);
}

TEST_CASE("fitted tail survives the round trip through compliance") {
    const std::string spec_file = dir + "/homog_spec.json";
    RunResult gen = run("spectrum " + dir +
                        "/homog.json --n-max 60 --tail-class quadratic --output " +
                        spec_file);
    REQUIRE(gen.code == 0);
    RunResult r = run("compliance " + spec_file + " --z-start 4 --z-count 1");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["points"].size() == 1);
    const double v = j["points"][0]["value"];
    const double bound = j["points"][0]["bound"];
    const double oracle_T = std::tanh(2.0) / 2.0;
    CHECK(std::fabs(v - oracle_T) <= 1e-8);
    CHECK(std::fabs(v - oracle_T) <= bound);
}

TEST_CASE("mass-side compliance carries no bound") {
    RunResult r = run("compliance " + dir + "/homog.json --z-start 4 --z-count 1");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::fabs(double(j["points"][0]["value"]) - std::tanh(2.0) / 2.0) <= 1e-9);
    CHECK(!j["points"][0].contains("bound"));
}

TEST_CASE("kasahara reports the mass scale") {
    RunResult r = run("kasahara " + dir + "/homog.json --alpha 1");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["alpha"] == 1.0);
    CHECK(std::fabs(double(j["report"]["estimate"]) - 1.0) <= 1e-4);
    CHECK(j["report"]["verdict"] == "converged");
}

TEST_CASE("classify names the density class") {
    RunResult r = run("classify " + dir + "/homog.json --n-max 60");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["class"] == "positive-density-possible");
    CHECK(std::fabs(double(j["sqrt_density_integral_over_pi"]) - 1.0 / M_PI) <= 1e-10);
}

TEST_CASE("density reports a zero limit for a pure chain") {
    RunResult r = run("density " + dir + "/atom.json");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "diverged-to-zero");
}

TEST_CASE("verify passes a healthy string") {
    RunResult r = run("verify " + dir + "/homog.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("RESULT: PASS") != std::string::npos);
}

TEST_CASE("verify survives inconsistent spectra and reports the failure") {
    RunResult r = run("verify " + dir + "/badtail.json");
    CHECK(r.code == 1);
    CHECK(r.out.find("spectral-consistency") != std::string::npos);
    CHECK(r.out.find("RESULT: FAIL") != std::string::npos);
}

TEST_CASE("exit codes separate input errors from numerical failures") {
    CHECK(run("spectrum " + dir + "/badkey.json").code == 2);
    RunResult bad = run("spectrum " + dir + "/badkey.json");
    CHECK(bad.err.find("\"len\"") != std::string::npos);

    CHECK(run("spectrum " + dir + "/homog.json --tol 1").code == 2);
    CHECK(run("spectrum /nonexistent.json").code == 2);
    CHECK(run("compliance " + dir + "/homog.json --z-factor 0.5").code == 2);
    CHECK(run("barcilon " + dir + "/atom.json").code == 2); // complete chain, no tail
    CHECK(run("tau " + dir + "/crossed.json").code == 2);   // interlacing broken
    CHECK(run("tau " + dir + "/badtail.json").code == 3);   // nonpositive residue
    CHECK(run("").code == 2);                               // a subcommand is required
    CHECK(run("frobnicate x.json").code == 2);
    CHECK(run("--help").code == 0);
    CHECK(run("spectrum --help").code == 0);
}

TEST_CASE("format gating rejects what a subcommand cannot render") {
    CHECK(run("verify " + dir + "/homog.json --format csv").code == 2);
    CHECK(run("spectrum " + dir + "/homog.json --format text").code == 2);
}
