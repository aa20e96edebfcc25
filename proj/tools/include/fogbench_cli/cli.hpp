#pragma once

#include <iosfwd>

namespace fogbench::cli {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutDirEnv = "FOGBENCH_OUT_DIR";

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fogbench::cli
