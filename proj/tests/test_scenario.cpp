#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsde/csv.hpp"
#include "qsde/scenario.hpp"

using namespace qsde;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qsde_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json minimal_transform() {
    return json::parse(R"({"scenario": "transform", "dim": 1,
        "matrices": {"H": [[[0, 0]]], "K": [[[2, 0]]], "R": [[[1, 0]]]}})");
}

}  // namespace

TEST_CASE("csv formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_int(-42) == "-42");
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvTable t({"a", "b"});
    t.add_row({"1", "x,y"});
    CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n");
    CHECK_THROWS_AS(t.add_row({"1"}), InvalidInput);
}

TEST_CASE("scenario listing is stable") {
    const auto& l = list_scenarios();
    REQUIRE(l.size() == 6);
    CHECK(l.front().id == "transform");
    CHECK(l.back().id == "lindblad");
}

TEST_CASE("config validation names the field") {
    json j = minimal_transform();
    j["dim"] = 2;
    try {
        ScenarioConfig::from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("matrices.H") != std::string::npos);
    }
    json bad = minimal_transform();
    bad["scenario"] = "nope";
    CHECK_THROWS_AS(ScenarioConfig::from_json(bad), ConfigError);
    json sched = minimal_transform();
    sched["alpha_schedule"] = json::array({0.1, -0.2});
    CHECK_THROWS_AS(ScenarioConfig::from_json(sched), ConfigError);
    json grid = minimal_transform();
    grid["grid"] = {{"x_min", -1.0}, {"x_max", 2.0}, {"n", 10}};
    CHECK_THROWS_AS(ScenarioConfig::from_json(grid), ConfigError);

    const fs::path dir = scratch_dir("parse");
    std::ofstream(dir / "broken.json") << "{\"scenario\": \"transform\",\n \"dim\": }";
    try {
        ScenarioConfig::load(dir / "broken.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("dot-path overrides") {
    json j = minimal_transform();
    apply_override(j, "tolerances.round_trip=1e-3");
    apply_override(j, "params.random_samples=4");
    const auto cfg = ScenarioConfig::from_json(j);
    CHECK(cfg.tol("round_trip", 0.0) == 1e-3);
    CHECK(cfg.params["random_samples"] == 4);
    CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
}

TEST_CASE("minimal transform run") {
    const fs::path dir = scratch_dir("transform");
    const auto rep = run_scenario(ScenarioConfig::from_json(minimal_transform()), dir);
    CHECK(rep.passed());
    CHECK(rep.exit_code() == kExitPass);
    REQUIRE(rep.csv_paths.size() == 1);
    CHECK(slurp(rep.csv_paths[0]).find("config,W,0,0,0,1\r\n") != std::string::npos);
    CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("limits run at kappa 0 and determinism") {
    json j = json::parse(R"({"scenario": "limits", "sectors": [{"kappa": 0}],
        "alpha_schedule": [0.3, 0.1, 0.03, 0.01], "time": {"t_max": 1.0}, "seed": 3})");
    const auto cfg = ScenarioConfig::from_json(j);
    const fs::path a = scratch_dir("limits_a"), b = scratch_dir("limits_b");
    const auto ra = run_scenario(cfg, a);
    const auto rb = run_scenario(cfg, b, 2);
    CHECK(ra.passed());
    CHECK(slurp(a / "limits.csv") == slurp(b / "limits.csv"));

    // failing check maps to exit status 1
    json tight = j;
    tight["tolerances"] = {{"q1_relative", 1e-30}};
    tight["alpha_schedule"] = json::array({0.3});
    const auto rt = run_scenario(ScenarioConfig::from_json(tight), scratch_dir("limits_tight"));
    CHECK(rt.exit_code() == kExitCheckFailed);
}
