#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fil::cli {

inline constexpr std::string_view kEngineVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalidInput = 2, kBudgetExceeded = 3 };

/// Runs one command line (without the program name). The payload goes to
/// `out`, diagnostics and error JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fil::cli
