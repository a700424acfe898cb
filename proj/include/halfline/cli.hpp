#pragma once

// Command-line front end. Each command validates its configuration in full
// before any solve, writes its artifacts and a manifest.json into the output
// directory, and returns the process exit status.
//
// Exit status: 0 success, 1 a stability gate tripped (verify), 2 invalid
// configuration, 3 numerical failure while running.

#include <filesystem>
#include <iosfwd>

#include "halfline/run_config.hpp"

namespace halfline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTripped = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirVariable = "HALFLINE_OUT_DIR";

std::filesystem::path output_dir(const RunConfig& config);

int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_kernel_scan(const RunConfig& config, std::ostream& log);

/// Parses argv, merges flags over an optional --config file and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfline::cli
