#pragma once

#include <ostream>

namespace conediff::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kMaxIters = 2,
  kInfeasible = 3,
};

/// Runs one command: solve, derivative, adjoint, check or gen. Result JSON
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace conediff::cli
