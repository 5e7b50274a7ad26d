#include "conediff/api.hpp"

#include <string>

#include "conediff/errors.hpp"

namespace conediff {

SolveAndDerivativeResult solve_and_derivative(const SparseMatrix& A,
                                              const Vector& b, const Vector& c,
                                              const ConeSpec& cones,
                                              const SolverConfig& solver_cfg,
                                              LinearSolverKind kind,
                                              const IterativeConfig& lsqr_cfg) {
  ConeProgramData data(A, b, c, cones);
  Solution sol = solve(data, solver_cfg);
  if (sol.status != SolveStatus::Solved) {
    throw StateError("solver did not certify a solution: status " +
                     std::string(to_string(sol.status)));
  }

  SolveAndDerivativeResult out;
  out.x = sol.x;
  out.y = sol.y;
  out.s = sol.s;
  out.solution = sol;
  auto handle = std::make_shared<const DerivativeHandle>(
      std::move(data), std::move(sol), kind, lsqr_cfg);
  out.handle = handle;
  out.derivative = [handle](const Vector& dA, const Vector& db,
                            const Vector& dc) {
    return handle->apply_derivative({dA, db, dc});
  };
  out.adjoint_derivative = [handle](const Vector& dx, const Vector& dy,
                                    const Vector& ds) {
    return handle->apply_adjoint_derivative({dx, dy, ds});
  };
  return out;
}

}  // namespace conediff
