#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toroidal::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitComparisonFailure = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 65;

inline constexpr const char* kVersion = "1.0.0";

/// Environment variable redirecting relative output paths.
inline constexpr const char* kOutputDirVariable = "TOROIDAL_OUTPUT_DIR";

/// Runs one command line (without the program name). JSON goes to --output or `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toroidal::cli
