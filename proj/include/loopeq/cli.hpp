#pragma once

#include <string>
#include <vector>

namespace loopeq {

// Exit codes of the front end.
enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitUsage = 2, kExitNumerical = 3 };

// Runs "loopeq <command> [flags]" with args excluding the program name.
// Reports go to --out or stdout; failures also carry a reason field there.
int run_command(const std::vector<std::string>& args);

}  // namespace loopeq
