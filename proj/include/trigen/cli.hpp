#pragma once

namespace trigen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitTargetUnmet = 4;  // only with --strict

/// The `trigen` command line: parse arguments, run the pipeline, write
/// outputs. Returns the process exit code (never throws).
int run_cli(int argc, const char* const* argv);

}  // namespace trigen
