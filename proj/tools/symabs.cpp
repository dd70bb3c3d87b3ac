// symabs <command> <fixture|config.json> [flags]
//
// Commands: certify, eta-bound, simulate, verify, shrink-input-set.
// Exit status: 0 pass, 1 verdict failed, 2 configuration error,
// 3 runtime error.

#include <iostream>

#include <CLI11.hpp>

#include "symabs/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace symabs::cli;

    CLI::App app{"Symbolic abstractions with certified control interfaces"};
    std::string command;
    std::string config;
    RunOptions opts;
    std::string out_dir = ".";

    app.add_option("command", command, "certify | eta-bound | simulate | verify | shrink-input-set")
        ->required();
    app.add_option("config", config, "shipped fixture name or path to a JSON configuration")
        ->required();
    app.add_option("--seed", opts.seed, "random seed for trials");
    app.add_option("--trials", opts.trials, "number of verification trials");
    app.add_option("--step", opts.step, "integration step h");
    app.add_option("--horizon", opts.horizon, "simulation horizon T");
    app.add_option("--theorem", opts.theorem, "eta condition: 2, 3 or 4")
        ->check(CLI::IsMember({2, 3, 4}));
    app.add_option("--out", out_dir, "directory for reports and trajectories");
    app.add_option("--tol", opts.tol, "numerical tolerance for definiteness checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfigError;
    }

    const auto cmd = parse_command(command);
    if (!cmd) {
        std::cerr << "unknown command: " << command << "\n";
        return kExitConfigError;
    }
    opts.out_dir = out_dir;

    ExperimentConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const symabs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }

    try {
        const CommandResult res = run_command(*cmd, cfg, opts);
        std::cout << res.summary;
        for (const auto& path : res.written) std::cout << "wrote " << path.string() << "\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}
