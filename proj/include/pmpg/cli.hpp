#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pmpg::cli {

// Exit codes: 0 success, 1 verification failed, 2 input error,
// 3 budget/iteration limit exceeded.
struct CommandOutcome {
  int exit_code = 0;
  nlohmann::json payload;       // always well-formed, printed to stdout
  std::string diagnostics;      // human notes, printed to stderr
};

CommandOutcome run(const std::vector<std::string>& args);

// Parses argv, prints payload/diagnostics, returns the exit code.
int main_entry(int argc, char** argv);

}  // namespace pmpg::cli
