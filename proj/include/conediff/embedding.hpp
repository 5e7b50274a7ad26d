#pragma once

#include <string_view>

#include "conediff/cones.hpp"
#include "conediff/sparse.hpp"

namespace conediff {

/// Problem data (A, b, c, K) of
///   minimize cᵀx  subject to  Ax + s = b, s ∈ K
/// and its dual
///   minimize bᵀy  subject to  Aᵀy + c = 0, y ∈ K*.
class ConeProgramData {
 public:
  ConeProgramData() = default;
  ConeProgramData(SparseMatrix a, Vector b, Vector c, ConeSpec cones);

  const SparseMatrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }
  const ConeSpec& cones() const { return cones_; }

  int m() const { return a_.rows(); }
  int n() const { return a_.cols(); }
  /// Embedding dimension n + m + 1.
  int N() const { return m() + n() + 1; }

 private:
  SparseMatrix a_;
  Vector b_;
  Vector c_;
  ConeSpec cones_;
};

/// z = (u, v, w) ∈ Rⁿ × Rᵐ × R.
class EmbeddingPoint {
 public:
  EmbeddingPoint() = default;
  EmbeddingPoint(Vector z, int n, int m);

  const Vector& vector() const { return z_; }
  int n() const { return n_; }
  int m() const { return m_; }

  auto u() const { return z_.head(n_); }
  auto v() const { return z_.segment(n_, m_); }
  double w() const { return z_[n_ + m_]; }

 private:
  Vector z_;
  int n_ = 0;
  int m_ = 0;
};

enum class SolveStatus { Solved, MaxIters, InfeasibleOrUnbounded };

std::string_view to_string(SolveStatus status);

struct KktResiduals {
  double primal = 0.0;  // ‖Ax + s − b‖
  double dual = 0.0;    // ‖Aᵀy + c‖
  double gap = 0.0;     // |sᵀy|
  double objective_gap = 0.0;  // |cᵀx + bᵀy|
};

struct SolutionTriple {
  Vector x;
  Vector y;
  Vector s;
};

struct Solution {
  Vector x;
  Vector y;
  Vector s;
  EmbeddingPoint z;
  SolveStatus status = SolveStatus::MaxIters;
  KktResiduals residuals;
  int iterations = 0;
  /// ‖N(z, Q)‖ at the returned point.
  double residual_map_norm = 0.0;
};

/// Q·p for the skew-symmetric embedding operator, never materialized:
///   Q = [[0, Aᵀ, c], [−A, 0, b], [−cᵀ, −bᵀ, 0]].
Vector apply_Q(const ConeProgramData& data, const Vector& p);
/// Qᵀ·p = −Q·p.
Vector apply_Q_adjoint(const ConeProgramData& data, const Vector& p);

/// Normalized residual map N(z, Q) = ((Q − I)Π + I)(z/|w|).
Vector residual_map(const ConeProgramData& data, const Vector& z);

KktResiduals kkt_residuals(const ConeProgramData& data, const Vector& x,
                           const Vector& y, const Vector& s);

/// Scale that KKT tolerances are relative to: 1 + ‖b‖ + ‖c‖.
double kkt_scale(const ConeProgramData& data);

/// φ(z) = (u, Π_{K*}(v), Π_{K*}(v) − v)/w.
SolutionTriple construct_solution(const EmbeddingPoint& z, const ConeSpec& spec);

/// z = (x, y − s, 1), after checking the optimality conditions to `tol`
/// relative to kkt_scale(data). Throws KktViolation naming the residual.
EmbeddingPoint embed_solution(const ConeProgramData& data, const Vector& x,
                              const Vector& y, const Vector& s, double tol);

/// M = ((Q − I)DΠ(z) + I)/w, the derivative of N in z at a solution (the
/// rank-one term of the general derivative vanishes there). Caches DΠ(z).
class ResidualJacobian {
 public:
  /// Requires sol.status == Solved; throws StateError otherwise.
  ResidualJacobian(const ConeProgramData& data, const Solution& sol);

  Vector apply(const Vector& dz) const;
  Vector apply_adjoint(const Vector& q) const;

  int dimension() const { return data_->N(); }
  const EmbeddingProjectionJacobian& projection_jacobian() const { return dpi_; }

 private:
  const ConeProgramData* data_;
  double w_;
  EmbeddingProjectionJacobian dpi_;
};

Vector apply_M(const ConeProgramData& data, const Solution& sol,
               const Vector& dz);
Vector apply_M_adjoint(const ConeProgramData& data, const Solution& sol,
                       const Vector& q);

/// Dφ(z)·dz, with dΠ_{K*} the cached Jacobian at v:
///   dx = (du − x dw)/w, dy = (DΠ dv − y dw)/w, ds = (DΠ dv − dv − s dw)/w.
SolutionTriple apply_dphi(const Solution& sol, const ProjectionJacobian& dproj,
                          const Vector& dz);
SolutionTriple apply_dphi(const Solution& sol, const ConeSpec& spec,
                          const Vector& dz);

/// Dφ(z)ᵀ(dx, dy, ds) = (dx, DΠ(dy + ds) − ds, −xᵀdx − yᵀdy − sᵀds)/w.
Vector apply_dphi_adjoint(const Solution& sol, const ProjectionJacobian& dproj,
                          const Vector& dx, const Vector& dy, const Vector& ds);
Vector apply_dphi_adjoint(const Solution& sol, const ConeSpec& spec,
                          const Vector& dx, const Vector& dy, const Vector& ds);

}  // namespace conediff
