#pragma once

#include <functional>
#include <memory>

#include "conediff/derivative.hpp"
#include "conediff/solver.hpp"

namespace conediff {

/// Solution plus the derivative and its adjoint as callables, the shape a
/// scripting-language binding exposes. The callables share ownership of the
/// underlying handle, so they stay valid after this object is gone.
struct SolveAndDerivativeResult {
  Vector x;
  Vector y;
  Vector s;
  Solution solution;
  std::function<SolutionPerturbation(const Vector& dA, const Vector& db,
                                     const Vector& dc)>
      derivative;
  std::function<ProgramPerturbation(const Vector& dx, const Vector& dy,
                                    const Vector& ds)>
      adjoint_derivative;
  std::shared_ptr<const DerivativeHandle> handle;
};

/// Throws StateError when the solver does not certify a solution.
SolveAndDerivativeResult solve_and_derivative(
    const SparseMatrix& A, const Vector& b, const Vector& c,
    const ConeSpec& cones, const SolverConfig& solver_cfg = {},
    LinearSolverKind kind = LinearSolverKind::Lsqr,
    const IterativeConfig& lsqr_cfg = {});

}  // namespace conediff
