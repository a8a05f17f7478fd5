#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depthlab/runner.hpp"

int main(int argc, char** argv) {
    // "depthlab cfg.json --set k=v" is shorthand for "depthlab run cfg.json".
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0] != "run" && args[0] != "sweep" && args[0][0] != '-')
        args.insert(args.begin(), "run");

    CLI::App app{"depthlab: convex bodies of probability measures and random polytope experiments"};
    app.require_subcommand(1);

    std::string run_config;
    std::vector<std::string> run_sets;
    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", run_config, "path to a JSON config")->required();
    run->add_option("--set", run_sets, "override config keys, dotted paths (key=value)");

    std::vector<std::string> sweep_configs;
    std::vector<std::string> sweep_sets;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run several configs of one command, merge CSVs");
    sweep->add_option("configs", sweep_configs, "paths to JSON configs")->required();
    sweep->add_option("--set", sweep_sets, "override config keys for every run");
    sweep->add_option("--out-dir", sweep_out, "directory for the merged CSV");

    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse((int)cargs.size(), const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    depthlab::RunOutcome outcome;
    if (run->parsed()) {
        outcome = depthlab::run_config_file(run_config, run_sets);
    } else {
        outcome = depthlab::run_sweep(sweep_configs, sweep_sets, sweep_out);
    }
    std::printf("%s\n", outcome.summary.c_str());
    return outcome.exit_code;
}
