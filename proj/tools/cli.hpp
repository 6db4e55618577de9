#pragma once

#include <string>
#include <vector>

namespace bipara::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command line (without the program name). Errors go to stderr as
/// {"error": message, "field": offending input}.
int run(const std::vector<std::string>& args);

}  // namespace bipara::cli
