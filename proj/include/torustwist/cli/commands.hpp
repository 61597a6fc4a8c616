// Subcommands of the torustwist tool. Each validates its keys, runs the
// computation, prints a short report and writes <out>/<command>.json plus a
// CSV where the command has tabular output.
#pragma once

#include <ostream>

#include "torustwist/cli/config.hpp"

namespace torustwist::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kNotFound = 4 };

int cmd_map_check(const RunConfig& cfg, std::ostream& out);
int cmd_rotation(const RunConfig& cfg, std::ostream& out);
int cmd_levelset(const RunConfig& cfg, std::ostream& out);
int cmd_orbit(const RunConfig& cfg, std::ostream& out);
int cmd_ric(const RunConfig& cfg, std::ostream& out);
int cmd_kcr(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);

/// Dispatches on cfg.command and maps exceptions to exit codes.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace torustwist::cli
