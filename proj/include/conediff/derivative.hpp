#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conediff/embedding.hpp"
#include "conediff/linop.hpp"
#include "conediff/solver.hpp"

namespace conediff {

enum class LinearSolverKind { Lsqr, Dense };

/// (dA, db, dc) with dA given on the pattern of A, in pattern order.
struct ProgramPerturbation {
  Vector dA;
  Vector db;
  Vector dc;
};

struct SolutionPerturbation {
  Vector dx;
  Vector dy;
  Vector ds;
};

/// Outcome of the inner linear solve of one derivative application.
struct LinearSolveInfo {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = true;
};

/// The derivative of the solution map (A, b, c) ↦ (x, y, s) and its adjoint
/// at a certified solution, as abstract linear maps. Caches Π(z/|w|), DΠ(z)
/// and (for the dense backend) a factorization of M; immutable afterwards, so
/// concurrent applications on one handle are safe.
class DerivativeHandle {
 public:
  DerivativeHandle(ConeProgramData data, Solution sol,
                   LinearSolverKind kind = LinearSolverKind::Lsqr,
                   IterativeConfig cfg = {});

  SolutionPerturbation apply_derivative(const ProgramPerturbation& p,
                                        LinearSolveInfo* info = nullptr) const;
  ProgramPerturbation apply_adjoint_derivative(
      const SolutionPerturbation& q, LinearSolveInfo* info = nullptr) const;

  const ConeProgramData& data() const { return *data_; }
  const Solution& solution() const { return *sol_; }
  /// Π(z/|w|).
  const Vector& projected_point() const { return pi_; }
  LinearSolverKind solver_kind() const { return kind_; }

  /// False when some projection was evaluated at a kink; the maps then use a
  /// generalized-Jacobian element.
  bool differentiable() const { return jacobian_->projection_jacobian().differentiable(); }
  std::vector<std::string> warnings() const;

  /// M and Mᵀ as a LinearMap, for diagnostics and backend comparisons.
  LinearMap residual_jacobian_map() const;
  /// Solve M dz = rhs (least squares) with the selected backend.
  Vector solve_M(const Vector& rhs, LinearSolveInfo* info = nullptr) const;
  Vector solve_M_adjoint(const Vector& rhs,
                         LinearSolveInfo* info = nullptr) const;

 private:
  std::shared_ptr<const ConeProgramData> data_;
  std::shared_ptr<const Solution> sol_;
  LinearSolverKind kind_;
  IterativeConfig cfg_;
  Vector pi_;
  std::shared_ptr<const ResidualJacobian> jacobian_;
  std::shared_ptr<const DenseFactorization> dense_;
};

/// dQ·π for the skew embedding of (dA, db, dc), computed blockwise.
Vector apply_dQ(const ConeProgramData& data, const ProgramPerturbation& p,
                const Vector& pi);

/// Restriction of g πᵀ to the parametrization of Q: dA on the pattern,
/// db = g_v π_w − π_v g_w, dc = g_u π_w − π_u g_w.
ProgramPerturbation extract_dQ(const ConeProgramData& data, const Vector& g,
                               const Vector& pi,
                               Execution exec = Execution::Parallel);

struct CoordinateCheck {
  enum class Part { A, b, c };
  Part part;
  /// Pattern position for A, index for b and c.
  int index;
  double rel_error;
  bool skipped;
};

struct GradientCheckReport {
  int samples = 0;
  int skipped = 0;
  double step = 0.0;
  double max_rel_error = 0.0;
  std::vector<CoordinateCheck> coordinates;
};

/// Compare apply_derivative against central differences of the re-solved
/// solution map on randomly sampled data coordinates.
GradientCheckReport gradient_check(const DerivativeHandle& handle,
                                   const SolverConfig& solver_cfg,
                                   int samples, double step,
                                   std::uint64_t seed);

std::string_view to_string(CoordinateCheck::Part part);

}  // namespace conediff
