#include "manetsim/runner.hpp"

#include <fstream>
#include <stdexcept>

#include "manetsim/report_io.hpp"
#include "manetsim/world.hpp"

namespace manetsim {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_result_tree(const std::filesystem::path& dir, const ExperimentResult& result,
                       const EmitSet& emit) {
    std::filesystem::create_directories(dir);
    if (emit.json) {
        write_file(dir / "report.json", render_report_json(result.summary, result.per_seed));
    }
    if (emit.csv) {
        std::filesystem::create_directories(dir / "series");
        for (const auto& [name, content] : series_csv_files(result.summary.series)) {
            write_file(dir / "series" / name, content);
        }
    }
}

}  // namespace

MetricsReport run_one(const ScenarioConfig& cfg, std::uint64_t seed, bool defense_on) {
    ScenarioConfig c = cfg;
    c.seed = seed;
    c.defense.enabled = defense_on;
    World world(c);
    return world.run();
}

ExperimentResult run_mode(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                          bool defense_on) {
    if (seeds.empty()) throw std::invalid_argument("seeds must not be empty");
    ExperimentResult result;
    result.per_seed.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        result.per_seed.push_back(run_one(cfg, seed, defense_on));
    }
    result.summary = mean_report(result.per_seed);
    return result;
}

int run_experiment(const RunSpec& spec) {
    try {
        std::filesystem::create_directories(spec.out_dir);
        {
            // A FAILED.txt from an earlier attempt must not outlive a
            // successful rerun.
            std::error_code ec;
            std::filesystem::remove(spec.out_dir / "FAILED.txt", ec);
        }
        if (spec.mode == RunMode::Compare) {
            ExperimentResult original = run_mode(spec.scenario, spec.seeds, false);
            ExperimentResult proposed = run_mode(spec.scenario, spec.seeds, true);
            write_result_tree(spec.out_dir / "original", original, spec.emit);
            write_result_tree(spec.out_dir / "proposed", proposed, spec.emit);
            Comparison c = compare_reports(original.summary, proposed.summary);
            if (spec.emit.table) write_file(spec.out_dir / "comparison.txt", comparison_table(c));
            if (spec.emit.json) write_file(spec.out_dir / "comparison.json", comparison_json(c));
        } else {
            ExperimentResult result =
                run_mode(spec.scenario, spec.seeds, spec.mode == RunMode::Proposed);
            write_result_tree(spec.out_dir, result, spec.emit);
        }
        return 0;
    } catch (const std::exception& e) {
        std::error_code ec;
        std::filesystem::create_directories(spec.out_dir, ec);
        std::ofstream out(spec.out_dir / "FAILED.txt", std::ios::binary | std::ios::trunc);
        if (out) out << e.what() << "\n";
        return 1;
    }
}

}  // namespace manetsim
