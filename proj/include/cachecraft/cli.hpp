#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cachecraft {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // infeasible placement, decode failure, solver failure
  kExitUsage = 2,       // bad flags or invalid input
  kExitLimit = 3,       // enumeration or size guard exceeded
  kExitNumeric = 4,
};

// Grid spec: "start:stop:step" (inclusive) or a comma list "0,1.5,3".
// Throws ValidationError on an empty or malformed spec.
std::vector<double> parse_grid(const std::string& spec);

// Entry point of the cachecraft tool. args excludes the program name.
// Results go to `out`; errors go to `err` as a JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cachecraft
