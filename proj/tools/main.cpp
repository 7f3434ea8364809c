#include "lam/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

// Exit codes: 0 all checks pass, 1 a check failed, 2 config error,
// 3 runtime failure.

int main(int argc, char** argv) {
    CLI::App app{"lam - Lagrangian averaging on manifolds: geometry verification,\n"
                 "geodesic means, isotropic fluctuation statistics and alpha-model solvers"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "path to the experiment config")->required();
    run->add_option("--out", out_override, "override the output directory");

    CLI::App* list = app.add_subcommand("list", "list experiment kinds, presets and schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        std::cout << lam::list_experiments();
        return 0;
    }

    lam::ExperimentConfig cfg;
    try {
        cfg = lam::ExperimentConfig::from_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        std::filesystem::path out = out_override.empty() ? cfg.output : out_override;
        lam::RunReport report = lam::run_experiment(cfg, out);
        for (const lam::CheckResult& c : report.checks)
            std::printf("%-38s %-4s measured=%-12.5g bound=%-10.5g (%s) [%.2fs]\n", c.name.c_str(),
                        c.pass ? "ok" : "FAIL", c.measured, c.bound, c.comparator.c_str(),
                        c.seconds);
        std::printf("%s: %s (report: %s)\n", report.experiment.c_str(),
                    report.pass ? "PASS" : "FAIL", (out / "report.json").c_str());
        return report.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return 3;
    }
}
