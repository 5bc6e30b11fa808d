#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stackboost::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDimensions = 3;
inline constexpr int kExitMethod = 4;
inline constexpr int kExitUsage = 5;

/// Runs the command line in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stackboost::cli
