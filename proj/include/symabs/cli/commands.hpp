#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "symabs/abstraction.hpp"
#include "symabs/cli/config.hpp"
#include "symabs/error.hpp"

namespace symabs::cli {

enum class Command { Certify, EtaBound, Simulate, Verify, ShrinkInputSet };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command cmd);

enum ExitCode : int {
    kExitPass = 0,
    kExitVerdictFail = 1,
    kExitConfigError = 2,
    kExitRuntimeError = 3,
};

int exit_code_for(ErrorCode code);

/// Command-line overrides of the configuration.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<EtaTheorem> theorem;
    std::optional<double> tol;
    std::filesystem::path out_dir = ".";
};

struct CommandResult {
    int exit_code = kExitPass;
    nlohmann::json report;
    std::string summary;  // human-readable lines for stdout
    std::vector<std::filesystem::path> written;
};

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& opts);

/// Header `t,x1_1..x1_n,phi_1..phi_n,x2_1..x2_n,u_1..u_m,v_1..v_m,y_err`,
/// one row per sample, numbers at 17 significant digits.
std::string trajectory_csv(const AugmentedRun& run);

/// Runs one command and writes its artifacts under opts.out_dir. Library
/// errors are caught and mapped onto exit codes; the report then carries
/// the error class and message.
CommandResult run_command(Command cmd, const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace symabs::cli
