#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace davies::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

// Subcommands: evolve, event-prob, trajectories, waiting-time,
// renewal-stats, verify. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace davies::cli
