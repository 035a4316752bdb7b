#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "manetsim/runner.hpp"
#include "manetsim/scenario_io.hpp"

using namespace manetsim;
namespace fs = std::filesystem;

namespace {

const char* kTinyScenario = R"({
  "node_count": 2,
  "sim_duration_s": 1.2,
  "flows": [{"src": 0, "dst": 1, "start_s": 0.0, "end_s": 1.0}],
  "attackers": [],
  "placement": {"mode": "explicit", "positions": [[0, 0], [100, 0]]}
})";

ScenarioConfig tiny_scenario() { return parse_scenario_json(kTinyScenario, "tiny"); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const char* name) {
    fs::path dir = fs::path("runner_test_out") / name;
    fs::remove_all(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& capture) {
    const char* bin = std::getenv("MANETSIM_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = "\"" + std::string(bin) + "\" " + args + " > \"" + capture.string() +
                      "\" 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("run_one stamps mode, seed, and defense setting") {
    ScenarioConfig cfg = tiny_scenario();
    MetricsReport off = run_one(cfg, 7, false);
    MetricsReport on = run_one(cfg, 7, true);
    CHECK(off.mode == "original");
    CHECK(on.mode == "proposed");
    CHECK(off.seeds == std::vector<std::uint64_t>{7});
    CHECK(off.scenario_fingerprint == on.scenario_fingerprint);
    CHECK(off.sent_total > 0.0);
}

TEST_CASE("run_mode averages the seeds it ran") {
    ScenarioConfig cfg = tiny_scenario();
    ExperimentResult r = run_mode(cfg, {5, 6}, true);
    REQUIRE(r.per_seed.size() == 2);
    CHECK(r.per_seed[0].seeds == std::vector<std::uint64_t>{5});
    CHECK(r.per_seed[1].seeds == std::vector<std::uint64_t>{6});
    CHECK(r.summary.seeds == std::vector<std::uint64_t>{5, 6});
    CHECK(r.summary.sent_total == (r.per_seed[0].sent_total + r.per_seed[1].sent_total) / 2.0);

    CHECK_THROWS_WITH_AS(run_mode(cfg, {}, true), "seeds must not be empty",
                         std::invalid_argument);
}

TEST_CASE("a run spec writes a report tree and reruns byte-identically") {
    RunSpec spec;
    spec.scenario = tiny_scenario();
    spec.mode = RunMode::Proposed;
    spec.seeds = {1, 2};
    spec.out_dir = fresh_dir("run_tree");

    REQUIRE(run_experiment(spec) == 0);
    CHECK_FALSE(fs::exists(spec.out_dir / "FAILED.txt"));
    REQUIRE(fs::exists(spec.out_dir / "report.json"));

    nlohmann::json j = nlohmann::json::parse(read_file(spec.out_dir / "report.json"));
    CHECK(j.at("schema") == "manetsim.report/1");
    CHECK(j.at("mode") == "proposed");
    CHECK(j.at("seeds") == nlohmann::json({1, 2}));
    CHECK(j.at("per_seed").size() == 2);

    int csv_count = 0;
    for (const auto& entry : fs::directory_iterator(spec.out_dir / "series")) {
        ++csv_count;
        CHECK(read_file(entry.path()).rfind("interval_start,value\n", 0) == 0);
    }
    CHECK(csv_count == 9);

    std::string first = read_file(spec.out_dir / "report.json");
    std::string first_csv = read_file(spec.out_dir / "series" / "generated_packets.csv");
    REQUIRE(run_experiment(spec) == 0);
    CHECK(read_file(spec.out_dir / "report.json") == first);
    CHECK(read_file(spec.out_dir / "series" / "generated_packets.csv") == first_csv);
}

TEST_CASE("a compare spec writes both trees and the delta artifacts") {
    RunSpec spec;
    spec.scenario = tiny_scenario();
    spec.mode = RunMode::Compare;
    spec.seeds = {3};
    spec.out_dir = fresh_dir("compare_tree");

    REQUIRE(run_experiment(spec) == 0);
    REQUIRE(fs::exists(spec.out_dir / "original" / "report.json"));
    REQUIRE(fs::exists(spec.out_dir / "proposed" / "report.json"));
    CHECK(fs::exists(spec.out_dir / "original" / "series" / "sent_packets.csv"));
    CHECK(fs::exists(spec.out_dir / "proposed" / "series" / "sent_packets.csv"));

    nlohmann::json orig = nlohmann::json::parse(read_file(spec.out_dir / "original" / "report.json"));
    nlohmann::json prop = nlohmann::json::parse(read_file(spec.out_dir / "proposed" / "report.json"));
    CHECK(orig.at("mode") == "original");
    CHECK(prop.at("mode") == "proposed");
    CHECK(orig.at("scenario_fingerprint") == prop.at("scenario_fingerprint"));

    std::string table = read_file(spec.out_dir / "comparison.txt");
    CHECK(table.find("metric") != std::string::npos);
    CHECK(table.find("delta") != std::string::npos);
    CHECK(table.find("sent_total") != std::string::npos);

    nlohmann::json cmp = nlohmann::json::parse(read_file(spec.out_dir / "comparison.json"));
    CHECK(cmp.at("schema") == "manetsim.comparison/1");
    CHECK(cmp.at("series_delta").size() == 9);
}

TEST_CASE("emit selection limits what gets written") {
    RunSpec spec;
    spec.scenario = tiny_scenario();
    spec.mode = RunMode::Compare;
    spec.seeds = {1};
    spec.out_dir = fresh_dir("emit_json_only");
    spec.emit = EmitSet{true, false, false};

    REQUIRE(run_experiment(spec) == 0);
    CHECK(fs::exists(spec.out_dir / "original" / "report.json"));
    CHECK(fs::exists(spec.out_dir / "comparison.json"));
    CHECK_FALSE(fs::exists(spec.out_dir / "original" / "series"));
    CHECK_FALSE(fs::exists(spec.out_dir / "comparison.txt"));
}

TEST_CASE("failures leave a diagnostic that a successful rerun removes") {
    RunSpec spec;
    spec.scenario = tiny_scenario();
    spec.scenario.node_count = 0;  // invalid on purpose
    spec.mode = RunMode::Proposed;
    spec.seeds = {1};
    spec.out_dir = fresh_dir("failed_run");

    CHECK(run_experiment(spec) == 1);
    REQUIRE(fs::exists(spec.out_dir / "FAILED.txt"));
    CHECK(read_file(spec.out_dir / "FAILED.txt").find("node_count must be positive") !=
          std::string::npos);

    spec.scenario = tiny_scenario();
    CHECK(run_experiment(spec) == 0);
    CHECK_FALSE(fs::exists(spec.out_dir / "FAILED.txt"));
    CHECK(fs::exists(spec.out_dir / "report.json"));
}

TEST_CASE("the cli validates, runs, and compares") {
    fs::path dir = fresh_dir("cli");
    fs::create_directories(dir);
    fs::path scenario = dir / "tiny.json";
    {
        std::ofstream out(scenario, std::ios::binary);
        out << kTinyScenario;
    }

    SUBCASE("validate prints the normalized scenario") {
        REQUIRE(run_cli("validate --scenario \"" + scenario.string() + "\"",
                        dir / "validate_out.txt") == 0);
        std::string text = read_file(dir / "validate_out.txt");
        ScenarioConfig parsed = parse_scenario_json(text, "cli");
        CHECK(parsed.fingerprint() == tiny_scenario().fingerprint());
        CHECK(text.find("\"node_count\": 2") != std::string::npos);
    }

    SUBCASE("validate without a scenario prints the built-in defaults") {
        REQUIRE(run_cli("validate", dir / "defaults_out.txt") == 0);
        std::string text = read_file(dir / "defaults_out.txt");
        CHECK(text.find("\"node_count\": 69") != std::string::npos);
    }

    SUBCASE("run writes artifacts where asked") {
        fs::path out = dir / "run_artifacts";
        REQUIRE(run_cli("run --scenario \"" + scenario.string() + "\" --seeds 4 --defense on" +
                            " --out \"" + out.string() + "\"",
                        dir / "run_out.txt") == 0);
        nlohmann::json j = nlohmann::json::parse(read_file(out / "report.json"));
        CHECK(j.at("mode") == "proposed");
        CHECK(j.at("seeds") == nlohmann::json({4}));
        CHECK(fs::exists(out / "series" / "received_packets.csv"));
    }

    SUBCASE("compare writes both trees") {
        fs::path out = dir / "cmp_artifacts";
        REQUIRE(run_cli("compare --scenario \"" + scenario.string() + "\" --seeds 4 --out \"" +
                            out.string() + "\"",
                        dir / "cmp_out.txt") == 0);
        CHECK(fs::exists(out / "original" / "report.json"));
        CHECK(fs::exists(out / "proposed" / "report.json"));
        CHECK(fs::exists(out / "comparison.txt"));
    }

    SUBCASE("a broken scenario file exits with 2") {
        fs::path bad = dir / "bad.json";
        {
            std::ofstream out(bad, std::ios::binary);
            out << R"({"node_count": 0})";
        }
        CHECK(run_cli("validate --scenario \"" + bad.string() + "\"", dir / "bad_out.txt") == 2);
        CHECK(read_file(dir / "bad_out.txt").find("node_count must be positive") !=
              std::string::npos);
    }

    SUBCASE("a missing required option exits with 2") {
        CHECK(run_cli("run --scenario \"" + scenario.string() + "\"", dir / "noout_out.txt") == 2);
    }

    SUBCASE("an unknown emit kind exits with 2") {
        CHECK(run_cli("run --scenario \"" + scenario.string() + "\" --out \"" +
                          (dir / "x").string() + "\" --emit bogus",
                      dir / "emit_out.txt") == 2);
    }
}
