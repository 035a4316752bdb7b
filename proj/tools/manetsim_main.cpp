#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manetsim/runner.hpp"
#include "manetsim/scenario_io.hpp"

namespace {

manetsim::ScenarioConfig load_scenario(const std::string& path) {
    if (path.empty()) {
        manetsim::ScenarioConfig cfg = manetsim::default_scenario();
        cfg.validate();
        return cfg;
    }
    return manetsim::load_scenario_file(path);
}

manetsim::EmitSet emit_set(const std::vector<std::string>& items) {
    if (items.empty()) return {};
    manetsim::EmitSet e{false, false, false};
    for (const std::string& item : items) {
        if (item == "json") e.json = true;
        if (item == "csv") e.csv = true;
        if (item == "table") e.table = true;
    }
    return e;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic ad hoc network simulator: on-demand routing under "
                 "route-request flooding, with a per-neighbor screening defense"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::string out_dir;
    std::vector<std::string> emit_items;
    bool strict_mode = false;
    std::string defense = "off";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path,
                        "Scenario JSON file; omitted keys use the built-in defaults")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seeds", seeds, "Seeds to run, averaged in the report")
            ->delimiter(',');
        cmd->add_flag("--strict-mode", strict_mode,
                      "Drop every packet kind from blacklisted neighbors, not just route requests");
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory for report artifacts")->required();
        cmd->add_option("--emit", emit_items, "Artifact kinds to write")
            ->delimiter(',')
            ->check(CLI::IsMember({"json", "csv", "table"}));
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Run one defense setting and write its report");
    add_common(run_cmd);
    add_output(run_cmd);
    run_cmd->add_option("--defense", defense, "Defense switch for this run")
        ->check(CLI::IsMember({"on", "off"}));

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Run defense off and on over the same seeds and write both plus the delta table");
    add_common(compare_cmd);
    add_output(compare_cmd);

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Parse the scenario and print its normalized form");
    add_common(validate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    manetsim::ScenarioConfig cfg;
    try {
        cfg = load_scenario(scenario_path);
        cfg.defense.strict_mode = strict_mode || cfg.defense.strict_mode;
        if (strict_mode) cfg.defense.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (validate_cmd->parsed()) {
        std::cout << manetsim::normalized_json(cfg);
        return 0;
    }

    manetsim::RunSpec spec;
    spec.scenario = cfg;
    spec.seeds = seeds;
    spec.out_dir = out_dir;
    spec.emit = emit_set(emit_items);
    if (run_cmd->parsed()) {
        spec.mode = defense == "on" ? manetsim::RunMode::Proposed : manetsim::RunMode::Original;
    } else {
        spec.mode = manetsim::RunMode::Compare;
    }

    if (seeds.empty()) {
        std::cerr << "error: --seeds must list at least one seed\n";
        return 2;
    }

    int rc = manetsim::run_experiment(spec);
    if (rc != 0) {
        std::cerr << "error: experiment failed; see " << (spec.out_dir / "FAILED.txt").string()
                  << "\n";
    }
    return rc;
}
