#include "conediff/embedding.hpp"

#include <cmath>
#include <string>

#include "conediff/errors.hpp"

namespace conediff {
namespace {

void check_embedding_length(const ConeProgramData& data, const Vector& p,
                            const char* what) {
  if (p.size() != data.N()) {
    throw InputError(std::string(what) + ": expected length " +
                     std::to_string(data.N()) + ", got " +
                     std::to_string(p.size()));
  }
}

void require_certified(const Solution& sol, const char* what) {
  if (sol.status != SolveStatus::Solved) {
    throw StateError(std::string(what) + " requires a certified solution");
  }
  if (!(sol.z.w() > 0.0)) {
    throw StateError(std::string(what) + " requires w > 0");
  }
}

}  // namespace

ConeProgramData::ConeProgramData(SparseMatrix a, Vector b, Vector c,
                                 ConeSpec cones)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)),
      cones_(std::move(cones)) {
  if (b_.size() != a_.rows()) {
    throw InputError("b has length " + std::to_string(b_.size()) +
                     ", expected m = " + std::to_string(a_.rows()));
  }
  if (c_.size() != a_.cols()) {
    throw InputError("c has length " + std::to_string(c_.size()) +
                     ", expected n = " + std::to_string(a_.cols()));
  }
  if (cones_.dimension() != a_.rows()) {
    throw InputError("cone dimension " + std::to_string(cones_.dimension()) +
                     " does not match m = " + std::to_string(a_.rows()));
  }
}

EmbeddingPoint::EmbeddingPoint(Vector z, int n, int m)
    : z_(std::move(z)), n_(n), m_(m) {
  if (n_ < 0 || m_ < 0 || z_.size() != n_ + m_ + 1) {
    throw InputError("embedding point has length " + std::to_string(z_.size()) +
                     ", expected n + m + 1 = " + std::to_string(n_ + m_ + 1));
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved:
      return "solved";
    case SolveStatus::MaxIters:
      return "max_iters";
    case SolveStatus::InfeasibleOrUnbounded:
      return "infeasible_or_unbounded";
  }
  return "unknown";
}

Vector apply_Q(const ConeProgramData& data, const Vector& p) {
  check_embedding_length(data, p, "apply_Q");
  const int n = data.n();
  const int m = data.m();
  const Vector pu = p.head(n);
  const Vector pv = p.segment(n, m);
  const double pw = p[n + m];

  Vector out(p.size());
  out.head(n) = data.A().multiply_transpose(pv) + data.c() * pw;
  out.segment(n, m) = -data.A().multiply(pu) + data.b() * pw;
  out[n + m] = -data.c().dot(pu) - data.b().dot(pv);
  return out;
}

Vector apply_Q_adjoint(const ConeProgramData& data, const Vector& p) {
  return -apply_Q(data, p);
}

Vector residual_map(const ConeProgramData& data, const Vector& z) {
  check_embedding_length(data, z, "residual_map");
  const double w = z[data.N() - 1];
  if (w == 0.0) {
    throw DomainError("residual_map: w = 0, normalization undefined");
  }
  const Vector zhat = z / std::abs(w);
  const Vector p = project_embedding(zhat, data.n(), data.cones());
  return apply_Q(data, p) - p + zhat;
}

KktResiduals kkt_residuals(const ConeProgramData& data, const Vector& x,
                           const Vector& y, const Vector& s) {
  if (x.size() != data.n() || y.size() != data.m() || s.size() != data.m()) {
    throw InputError("kkt_residuals: (x, y, s) dimensions do not match data");
  }
  KktResiduals r;
  r.primal = (data.A().multiply(x) + s - data.b()).norm();
  r.dual = (data.A().multiply_transpose(y) + data.c()).norm();
  r.gap = std::abs(s.dot(y));
  r.objective_gap = std::abs(data.c().dot(x) + data.b().dot(y));
  return r;
}

double kkt_scale(const ConeProgramData& data) {
  return 1.0 + data.b().norm() + data.c().norm();
}

SolutionTriple construct_solution(const EmbeddingPoint& z,
                                  const ConeSpec& spec) {
  const double w = z.w();
  if (!(w > 0.0)) {
    throw DomainError("construct_solution: w must be positive, got " +
                      std::to_string(w));
  }
  const Vector v = z.v();
  const Vector proj = project_dual_cone(v, spec);
  return {z.u() / w, proj / w, (proj - v) / w};
}

EmbeddingPoint embed_solution(const ConeProgramData& data, const Vector& x,
                              const Vector& y, const Vector& s, double tol) {
  const KktResiduals r = kkt_residuals(data, x, y, s);
  const double bound = tol * kkt_scale(data);
  auto check = [&](const char* name, double value) {
    if (!(value <= bound)) throw KktViolation(name, value, bound);
  };
  check("primal", r.primal);
  check("dual", r.dual);
  check("gap", r.gap);
  check("primal cone", distance_to_primal_cone(s, data.cones()));
  check("dual cone", distance_to_dual_cone(y, data.cones()));

  Vector z(data.N());
  z << x, y - s, 1.0;
  return EmbeddingPoint(std::move(z), data.n(), data.m());
}

ResidualJacobian::ResidualJacobian(const ConeProgramData& data,
                                   const Solution& sol)
    : data_(&data) {
  require_certified(sol, "ResidualJacobian");
  w_ = sol.z.w();
  dpi_ = dproject_embedding(sol.z.vector(), data.n(), data.cones());
}

Vector ResidualJacobian::apply(const Vector& dz) const {
  check_embedding_length(*data_, dz, "apply_M");
  const Vector p = dpi_.apply(dz);
  return (apply_Q(*data_, p) - p + dz) / w_;
}

Vector ResidualJacobian::apply_adjoint(const Vector& q) const {
  check_embedding_length(*data_, q, "apply_M_adjoint");
  const Vector t = apply_Q_adjoint(*data_, q) - q;
  return (dpi_.apply(t) + q) / w_;
}

Vector apply_M(const ConeProgramData& data, const Solution& sol,
               const Vector& dz) {
  return ResidualJacobian(data, sol).apply(dz);
}

Vector apply_M_adjoint(const ConeProgramData& data, const Solution& sol,
                       const Vector& q) {
  return ResidualJacobian(data, sol).apply_adjoint(q);
}

SolutionTriple apply_dphi(const Solution& sol, const ProjectionJacobian& dproj,
                          const Vector& dz) {
  require_certified(sol, "apply_dphi");
  const int n = sol.z.n();
  const int m = sol.z.m();
  if (dz.size() != n + m + 1) {
    throw InputError("apply_dphi: dz has wrong length");
  }
  const double w = sol.z.w();
  const Vector du = dz.head(n);
  const Vector dv = dz.segment(n, m);
  const double dw = dz[n + m];
  const Vector jdv = dproj.apply(dv);
  return {(du - sol.x * dw) / w, (jdv - sol.y * dw) / w,
          (jdv - dv - sol.s * dw) / w};
}

SolutionTriple apply_dphi(const Solution& sol, const ConeSpec& spec,
                          const Vector& dz) {
  require_certified(sol, "apply_dphi");
  return apply_dphi(sol, dproject_dual_cone(sol.z.v(), spec), dz);
}

Vector apply_dphi_adjoint(const Solution& sol, const ProjectionJacobian& dproj,
                          const Vector& dx, const Vector& dy,
                          const Vector& ds) {
  require_certified(sol, "apply_dphi_adjoint");
  const int n = sol.z.n();
  const int m = sol.z.m();
  if (dx.size() != n || dy.size() != m || ds.size() != m) {
    throw InputError("apply_dphi_adjoint: (dx, dy, ds) have wrong lengths");
  }
  const double w = sol.z.w();
  Vector dz(n + m + 1);
  dz.head(n) = dx;
  dz.segment(n, m) = dproj.apply(dy + ds) - ds;
  dz[n + m] = -sol.x.dot(dx) - sol.y.dot(dy) - sol.s.dot(ds);
  return dz / w;
}

Vector apply_dphi_adjoint(const Solution& sol, const ConeSpec& spec,
                          const Vector& dx, const Vector& dy,
                          const Vector& ds) {
  require_certified(sol, "apply_dphi_adjoint");
  return apply_dphi_adjoint(sol, dproject_dual_cone(sol.z.v(), spec), dx, dy,
                            ds);
}

}  // namespace conediff
