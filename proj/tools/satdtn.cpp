// satdtn command line front end: run scenario configs, print metric reports
// and pass plans, compare radio profiles, export the canned scenarios.
//
// Exit codes: 0 all scenario assertions passed, 1 assertion failure,
// 2 usage or configuration error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "satdtn/config.hpp"
#include "satdtn/engine.hpp"
#include "satdtn/report.hpp"
#include "satdtn/scenarios.hpp"

using nlohmann::json;

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<satdtn::DurationMs> until, const std::string& report_path,
            const std::string& log_path) {
    satdtn::ScenarioConfig cfg = satdtn::load_config_file(config_path);
    satdtn::RunOptions opts;
    opts.seed_override = seed;
    opts.until_override = until;
    opts.log_path = log_path;

    satdtn::RunResult result = satdtn::run(cfg, opts);
    json report = satdtn::build_report(cfg.name, result.metrics);
    satdtn::render_report_text(std::cout, report);

    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        if (!out.is_open()) {
            std::cerr << "error: cannot write report to '" << report_path << "'\n";
            return 2;
        }
        out << satdtn::report_to_string(report);
    }
    return result.assertions_passed ? 0 : 1;
}

int cmd_compare(satdtn::DurationMs window_s) {
    satdtn::render_profile_comparison(std::cout, window_s * 1000);
    return 0;
}

int cmd_plan(const std::string& eph_arg, satdtn::TimeMs from, satdtn::TimeMs to) {
    json j;
    if (!eph_arg.empty() && eph_arg.front() == '{') {
        j = json::parse(eph_arg, nullptr, false);
        if (j.is_discarded()) throw satdtn::ConfigError("--ephemeris: invalid inline JSON");
    } else {
        std::ifstream in(eph_arg);
        if (!in.good())
            throw satdtn::ConfigError("--ephemeris: file '" + eph_arg + "' is not readable");
        in >> j;
    }
    satdtn::OrbitEphemeris eph;
    eph.satellite_id = j.value("satellite_id", "sat");
    if (!j.contains("period_ms") || !j.contains("window_ms"))
        throw satdtn::ConfigError("--ephemeris: needs period_ms and window_ms");
    eph.last_passage = j.value("last_passage_ms", satdtn::TimeMs{0});
    eph.period = j.at("period_ms").get<satdtn::DurationMs>();
    eph.window = j.at("window_ms").get<satdtn::DurationMs>();
    eph.validate();
    if (from > to) throw satdtn::ConfigError("--from must be <= --to");
    satdtn::render_pass_plan(std::cout, eph, from, to);
    return 0;
}

int cmd_export(const std::string& name, const std::string& out_path, bool list) {
    auto canned = satdtn::canned_scenarios();
    if (list) {
        for (const auto& [n, cfg] : canned) std::cout << n << "\n";
        return 0;
    }
    auto it = canned.find(name);
    if (it == canned.end()) {
        std::cerr << "error: unknown scenario '" << name << "' (use --list)\n";
        return 2;
    }
    const std::string text = satdtn::config_to_json(it->second).dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out.is_open()) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        out << text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Store-and-forward satellite uplink simulator"};
    app.require_subcommand(1);

    // run
    std::string config_path, report_path, log_path;
    std::optional<std::uint64_t> seed;
    std::optional<satdtn::DurationMs> until;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario config");
    run_cmd->add_option("config", config_path, "Scenario config JSON")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--until", until, "Stop the run at this time (ms)");
    run_cmd->add_option("--report", report_path, "Write the structured report here");
    run_cmd->add_option("--log", log_path, "Write the NDJSON event log here");

    // compare-profiles
    satdtn::DurationMs window_s = 300;
    auto* cmp_cmd = app.add_subcommand("compare-profiles", "Radio profile comparison table");
    cmp_cmd->add_option("--window", window_s, "Pass window length in seconds")
        ->check(CLI::PositiveNumber);

    // plan-passes
    std::string eph_arg;
    satdtn::TimeMs from = 0, to = 86'400'000;
    auto* plan_cmd = app.add_subcommand("plan-passes", "List pass windows in a time range");
    plan_cmd->add_option("--ephemeris", eph_arg, "Inline JSON or a file path")->required();
    plan_cmd->add_option("--from", from, "Range start (ms)");
    plan_cmd->add_option("--to", to, "Range end (ms)");

    // export
    std::string scenario_name, out_path;
    bool list = false;
    auto* exp_cmd = app.add_subcommand("export", "Export a canned scenario as a config file");
    exp_cmd->add_option("name", scenario_name, "Scenario name");
    exp_cmd->add_option("-o,--out", out_path, "Output path (default stdout)");
    exp_cmd->add_flag("--list", list, "List canned scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, seed, until, report_path, log_path);
        if (cmp_cmd->parsed()) return cmd_compare(window_s);
        if (plan_cmd->parsed()) return cmd_plan(eph_arg, from, to);
        if (exp_cmd->parsed()) return cmd_export(scenario_name, out_path, list);
    } catch (const satdtn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
