#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"

namespace chiral::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitSolver = 3, kExitPhysicality = 4 };

/// Runs one task and writes its files. Errors are mapped to exit codes.
int run(const RunConfig& config);

struct FigureInfo {
  std::string tag;
  std::string description;
  bool long_running = false;
};
const std::vector<FigureInfo>& figures();

/// Runs the canned configs of a figure. base supplies out_dir, workers,
/// solver and ack_long.
int reproduce(const std::string& tag, const RunConfig& base);

/// Expected wall time of one steady-state solve, from measured scaling.
double estimate_solve_seconds(const SystemParams& params);

}  // namespace chiral::cli
