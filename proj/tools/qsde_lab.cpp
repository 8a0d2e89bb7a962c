// qsde_lab — scenario runner for the quantum stochastic lab.
//
//   qsde_lab list
//   qsde_lab limits --config configs/limits.json --out out/limits --override tolerances.q1_relative=0.05
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage/config error, 3 resolution error.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qsde/scenario.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("qsde");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("QSDE_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else spdlog::set_level(spdlog::level::err);
}

struct RunArgs {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    int jobs = 1;
};

int run(const std::string& scenario, const RunArgs& a) {
    try {
        const auto cfg = qsde::ScenarioConfig::load(a.config, a.overrides);
        if (cfg.scenario != scenario) {
            std::cerr << "error: config " << a.config << " is for scenario '" << cfg.scenario << "', not '"
                      << scenario << "'\n";
            return qsde::kExitUsage;
        }
        const std::string out = a.out.empty() ? "out/" + scenario : a.out;
        const auto rep = qsde::run_scenario(cfg, out, a.jobs);
        for (const auto& c : rep.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << c.value
                      << "  threshold=" << c.threshold << '\n';
        for (const auto& p : rep.csv_paths) std::cout << "csv: " << p.string() << '\n';
        std::cout << scenario << ": " << (rep.passed() ? "pass" : "FAIL") << " (" << rep.wall_seconds << " s)\n";
        return rep.exit_code();
    } catch (const qsde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qsde::kExitUsage;
    } catch (const qsde::ResolutionError& e) {
        std::cerr << "resolution error: " << e.what()
                  << "\n  hint: increase time.n_steps (refinement cap) or the grid size,"
                     " or loosen tolerances.solver\n";
        return qsde::kExitResolution;
    } catch (const qsde::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return qsde::kExitUsage;
    } catch (const qsde::Error& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return qsde::kExitCheckFailed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Quantum stochastic lab: coefficient transforms, limits, boundary jumps, Lindblad semigroups"};
    app.require_subcommand(1);

    std::vector<std::pair<std::string, RunArgs>> subs;
    subs.reserve(qsde::list_scenarios().size());
    for (const auto& info : qsde::list_scenarios()) {
        subs.emplace_back(info.id, RunArgs{});
        RunArgs& a = subs.back().second;
        auto* sc = app.add_subcommand(info.id, info.description);
        sc->add_option("--config", a.config, "scenario JSON file")->required()->check(CLI::ExistingFile);
        sc->add_option("--out", a.out, "output directory (default out/<scenario>)");
        sc->add_option("--override", a.overrides, "dot-path override, e.g. tolerances.jump=1e-3")->take_all();
        sc->add_option("--jobs", a.jobs, "threads for independent sweep points")->check(CLI::PositiveNumber);
    }
    app.add_subcommand("list", "list the scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qsde::kExitUsage;
    }

    if (app.got_subcommand("list")) {
        for (const auto& info : qsde::list_scenarios()) std::cout << info.id << "\t" << info.description << '\n';
        return qsde::kExitPass;
    }
    for (const auto& [id, a] : subs)
        if (app.got_subcommand(id)) return run(id, a);
    return qsde::kExitUsage;
}
