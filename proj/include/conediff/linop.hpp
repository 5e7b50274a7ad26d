#pragma once

#include <functional>
#include <variant>
#include <vector>

#include <Eigen/QR>
#include <Eigen/LU>

#include "conediff/sparse.hpp"

namespace conediff {

/// Square abstract linear map: apply and apply-adjoint closures.
class LinearMap {
 public:
  using Fn = std::function<Vector(const Vector&)>;

  LinearMap(int dimension, Fn apply, Fn apply_adjoint)
      : dim_(dimension), apply_(std::move(apply)),
        adjoint_(std::move(apply_adjoint)) {}

  int dimension() const { return dim_; }
  Vector apply(const Vector& x) const { return apply_(x); }
  Vector apply_adjoint(const Vector& y) const { return adjoint_(y); }

  LinearMap adjoint() const { return LinearMap(dim_, adjoint_, apply_); }

  static LinearMap identity(int dimension);
  static LinearMap from_dense(Matrix matrix);

 private:
  int dim_;
  Fn apply_;
  Fn adjoint_;
};

struct IterativeConfig {
  /// 0 selects 10·N.
  int max_iterations = 0;
  double atol = 1e-14;
  double btol = 1e-14;
  /// Stop once the running condition estimate exceeds this.
  double condition_limit = 1e12;
};

enum class LsqrStop {
  ZeroRhs,
  Residual,       // ‖r‖ ≤ btol‖b‖ + atol‖A‖‖x‖
  LeastSquares,   // ‖Aᵀr‖ ≤ atol‖A‖‖r‖
  Condition,
  IterationLimit,
};

struct LsqrResult {
  Vector x;
  int iterations = 0;
  double residual_norm = 0.0;
  /// ‖r_k‖ estimate after every iteration (non-increasing).
  std::vector<double> residual_history;
  LsqrStop stop = LsqrStop::ZeroRhs;

  /// False when the iteration budget ran out; the iterate is still returned.
  bool converged() const { return stop != LsqrStop::IterationLimit; }
};

/// Golub–Kahan bidiagonalization LSQR for min ‖A x − rhs‖₂ from x₀ = 0, which
/// yields the minimum-norm least-squares solution on singular systems.
LsqrResult lsqr_solve(const LinearMap& map, const Vector& rhs,
                      const IterativeConfig& cfg = {});

inline constexpr int kDenseGuard = 2000;

/// Column i is map.apply(eᵢ).
Matrix materialize(const LinearMap& map, int guard = kDenseGuard);

/// Factorization of a materialized map, reusable for solves with the map and
/// with its adjoint. Row-pivoted LU when well conditioned; otherwise complete
/// orthogonal decompositions of M and Mᵀ, giving the minimum-norm
/// least-squares solution like LSQR.
class DenseFactorization {
 public:
  explicit DenseFactorization(Matrix matrix);

  Vector solve(const Vector& rhs) const;
  Vector solve_adjoint(const Vector& rhs) const;

  bool singular() const { return std::holds_alternative<MinNorm>(factor_); }
  const Matrix& matrix() const { return matrix_; }

 private:
  struct MinNorm {
    Eigen::CompleteOrthogonalDecomposition<Matrix> forward;  // M
    Eigen::CompleteOrthogonalDecomposition<Matrix> adjoint;  // Mᵀ
  };
  Matrix matrix_;
  std::variant<Eigen::PartialPivLU<Matrix>, MinNorm> factor_;
};

Vector dense_solve(const LinearMap& map, const Vector& rhs,
                   int guard = kDenseGuard);

}  // namespace conediff
