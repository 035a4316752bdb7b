#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "manetsim/metrics.hpp"
#include "manetsim/scenario.hpp"

namespace manetsim {

enum class RunMode : std::uint8_t { Original, Proposed, Compare };

struct EmitSet {
    bool json = true;
    bool csv = true;
    bool table = true;
};

struct RunSpec {
    ScenarioConfig scenario;
    RunMode mode = RunMode::Compare;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::filesystem::path out_dir;
    EmitSet emit;
};

// One simulation with the defense forced on or off and the given seed.
MetricsReport run_one(const ScenarioConfig& cfg, std::uint64_t seed, bool defense_on);

struct ExperimentResult {
    MetricsReport summary;  // arithmetic mean across seeds
    std::vector<MetricsReport> per_seed;
};

// Runs every seed in order for one defense setting.
ExperimentResult run_mode(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                          bool defense_on);

// Executes the described run and writes artifacts under out_dir:
//   run modes:   report.json, series/*.csv
//   compare:     original/ and proposed/ trees, comparison.txt, comparison.json
// Returns 0 on success. On failure writes FAILED.txt with the diagnostic into
// out_dir and returns nonzero. Rerunning an identical spec rewrites
// byte-identical files.
int run_experiment(const RunSpec& spec);

}  // namespace manetsim
