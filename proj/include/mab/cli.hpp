#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kInvalidInput = 2, kRegimeViolation = 3, kInternalError = 4 };

/// Runs one command line (args[0] is the program name). Summaries go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a flat key=value config file into "--key=value" tokens. '#' starts a comment.
std::vector<std::string> config_tokens(const std::string& path);

}  // namespace mab::cli
