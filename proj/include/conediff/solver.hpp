#pragma once

#include <vector>

#include "conediff/embedding.hpp"
#include "conediff/linop.hpp"

namespace conediff {

struct SolverConfig {
  int max_iterations = 100000;
  /// KKT residuals must fall below tolerance·(1 + ‖b‖ + ‖c‖).
  double tolerance = 1e-8;
  /// Gauss–Newton steps on ‖N(z, Q)‖ once the splitting iterate is close.
  int refine_steps = 2;
  /// Over-relaxation of the splitting iteration, in (0, 2).
  double relaxation = 1.5;
  /// Residuals are evaluated every this many iterations.
  int check_interval = 10;
};

/// Solve the primal-dual pair by operator splitting on the homogeneous
/// self-dual embedding, followed by optional refinement of N(z, Q) = 0.
/// The returned z is scaled so that w = 1.
Solution solve(const ConeProgramData& data, const SolverConfig& cfg = {});

/// Certify an externally produced (x, y, s); throws KktViolation naming the
/// offending residual.
Solution accept_solution(const ConeProgramData& data, const Vector& x,
                         const Vector& y, const Vector& s, double tol);

struct RefineResult {
  Vector z;
  /// ‖N(z, Q)‖ before the first step and after every accepted step.
  std::vector<double> residual_norms;
};

/// Semismooth Gauss–Newton on the normalized residual map, using LSQR on the
/// full derivative ((Q − I)DΠ(z) + I − N(z)eᵀ)/w. Steps that do not decrease
/// ‖N‖ are halved and finally rejected, so ‖N‖ never increases.
RefineResult refine(const ConeProgramData& data, const Vector& z, int steps);

}  // namespace conediff
