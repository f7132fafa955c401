#pragma once

#include "asymptopt/problem.hpp"

namespace asymptopt {

// Exit codes: 0 ok, 2 verdict failure, 3 precondition violated, 4 input error.
enum ExitCode { kOk = 0, kVerdictFailure = 2, kPrecondition = 3, kInputError = 4 };

// Dispatch one command (check-existence | asym | solve | psi | sharp |
// stability | all), writing CSV/JSON artifacts under out_dir.
int run_command(const std::string& command, const ProblemSpec& spec, const RunConfig& cfg,
                const std::string& out_dir);

}  // namespace asymptopt
