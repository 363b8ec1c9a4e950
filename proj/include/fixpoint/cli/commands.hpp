#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "fixpoint/cli/config.hpp"

namespace fixpoint::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
/// Violated, non-convergent, indeterminate, or a failed class check in verify-class.
inline constexpr int kExitNegative = 2;
/// check: a metric axiom, class membership or dominance check failed.
inline constexpr int kExitClassFailure = 3;

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    /// One line for the terminal.
    std::string summary;
};

CommandResult cmd_check(const ProblemConfig& cfg, std::size_t threads);
CommandResult cmd_solve(const ProblemConfig& cfg, std::size_t threads);
CommandResult cmd_verify_class(const ProblemConfig& cfg, std::size_t threads);
CommandResult cmd_reduce(const ProblemConfig& cfg, std::size_t threads);

/// Worker count from FIXPOINT_LAB_THREADS, else the hardware concurrency.
std::size_t threads_from_environment();

/// Pretty-printed report with sorted keys and a trailing newline.
std::string render(const nlohmann::json& report);

/// Entry point of the fixpoint_lab executable.
int run(int argc, char** argv);

}  // namespace fixpoint::cli
