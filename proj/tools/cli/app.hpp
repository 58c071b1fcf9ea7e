#pragma once

namespace oneclass::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Parses argv, dispatches to the matching cmd_* and maps failures to exit
// codes: usage errors (bad flags, invalid hyperparameters) return 2, data and
// numerical failures return 1.
int run(int argc, char** argv);

}  // namespace oneclass::cli
