#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qkgp::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kNumeric = 3,
    kIo = 4,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "QKGP_OUT_DIR";

/// Runs one qkgp invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkgp::cli
