#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixrip/cli.hpp"

using namespace mixrip;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    std::vector<char*> argv;
    static std::vector<std::string> keep;
    keep = std::move(args);
    keep.insert(keep.begin(), "mixrip");
    for (auto& a : keep) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path tmpdir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("missing subcommand or seed is a usage error") {
    CHECK(run({}) == 2);
    CHECK(run({"legacy"}) == 2);  // --seed is required
    CHECK(run({"frobnicate", "--seed", "1"}) == 2);
}

TEST_CASE("invalid enum values are usage errors") {
    CHECK(run({"sketch", "--seed", "1", "--base", "cauchy"}) == 2);
    CHECK(run({"sketch", "--seed", "1", "--scheme", "qmc"}) == 2);
}

TEST_CASE("empty k range is a usage error") {
    CHECK(run({"variance", "--seed", "1", "--kmax", "0"}) == 2);
}

TEST_CASE("legacy command writes artifacts and succeeds") {
    const fs::path out = tmpdir("mixrip_cli_legacy");
    CHECK(run({"legacy", "--seed", "3", "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "legacy-3.csv"));
    CHECK(fs::exists(out / "legacy-3.json"));
    std::ifstream js(out / "legacy-3.json");
    nlohmann::json sidecar;
    js >> sidecar;
    CHECK(sidecar.contains("config"));
    CHECK(sidecar["config"]["seed"] == 3);
    CHECK(sidecar.contains("runtime_seconds"));
    fs::remove_all(out);
}

TEST_CASE("sketch command is seed deterministic") {
    const fs::path out = tmpdir("mixrip_cli_sketch");
    CHECK(run({"sketch", "--seed", "11", "--m", "64", "--out", out.string()}) == 0);
    std::ifstream a(out / "sketch-11.csv");
    std::string first((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    CHECK(run({"sketch", "--seed", "11", "--m", "64", "--out", out.string()}) == 0);
    std::ifstream b(out / "sketch-11.csv");
    std::string second((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(first == second);
    CHECK(!first.empty());
    fs::remove_all(out);
}

TEST_CASE("sample-freqs writes csv json and binary") {
    const fs::path out = tmpdir("mixrip_cli_freqs");
    CHECK(run({"sample-freqs", "--seed", "9", "--m", "32", "--d", "3",
               "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "sample-freqs-9.csv"));
    CHECK(fs::exists(out / "sample-freqs-9.json"));
    CHECK(fs::exists(out / "sample-freqs-9.mxrp"));
    fs::remove_all(out);
}

TEST_CASE("config file fills unset flags and flags win") {
    const fs::path out = tmpdir("mixrip_cli_config");
    fs::create_directories(out);
    const fs::path cfg = out / "cfg.json";
    {
        std::ofstream f(cfg);
        f << "{\"m\": 16, \"d\": 3}\n";
    }
    CHECK(run({"sample-freqs", "--seed", "2", "--config", cfg.string(), "--d", "4",
               "--out", out.string()}) == 0);
    std::ifstream js(out / "sample-freqs-2.json");
    nlohmann::json sidecar;
    js >> sidecar;
    CHECK(sidecar["config"]["m"] == 16);  // from the config file
    CHECK(sidecar["config"]["d"] == 4);   // flag overrides the file
    fs::remove_all(out);
}

TEST_CASE("unknown config keys are rejected") {
    const fs::path out = tmpdir("mixrip_cli_badcfg");
    fs::create_directories(out);
    const fs::path cfg = out / "cfg.json";
    {
        std::ofstream f(cfg);
        f << "{\"emm\": 16}\n";
    }
    CHECK(run({"sample-freqs", "--seed", "2", "--config", cfg.string(),
               "--out", out.string()}) == 2);
    CHECK(run({"sample-freqs", "--seed", "2", "--config",
               (out / "missing.json").string(), "--out", out.string()}) == 2);
    fs::remove_all(out);
}

TEST_CASE("variance command runs a small sweep") {
    const fs::path out = tmpdir("mixrip_cli_var");
    CHECK(run({"variance", "--seed", "4", "--kmin", "1", "--kmax", "2",
               "--draws", "2000", "--out", out.string()}) == 0);
    std::ifstream js(out / "variance-4.json");
    nlohmann::json sidecar;
    js >> sidecar;
    REQUIRE(sidecar.contains("assertions"));
    for (const auto& a : sidecar["assertions"]) CHECK(a["pass"] == true);
    fs::remove_all(out);
}
