#include "conediff/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "conediff/errors.hpp"
#include "conediff/kernels.hpp"

namespace conediff {
namespace {

constexpr double kFiniteDifferenceFloor = 1e-6;

void check_perturbation(const ConeProgramData& data,
                        const ProgramPerturbation& p) {
  if (p.dA.size() != data.A().nnz()) {
    throw InputError("dA has " + std::to_string(p.dA.size()) +
                     " values, pattern of A has " +
                     std::to_string(data.A().nnz()));
  }
  if (p.db.size() != data.m()) throw InputError("db has wrong length");
  if (p.dc.size() != data.n()) throw InputError("dc has wrong length");
}

void record(LinearSolveInfo* info, const LinearSolveInfo& value) {
  if (info != nullptr) *info = value;
}

ProgramPerturbation zero_program_perturbation(const ConeProgramData& data) {
  return {Vector::Zero(data.A().nnz()), Vector::Zero(data.m()),
          Vector::Zero(data.n())};
}

}  // namespace

std::string_view to_string(CoordinateCheck::Part part) {
  switch (part) {
    case CoordinateCheck::Part::A:
      return "A";
    case CoordinateCheck::Part::b:
      return "b";
    case CoordinateCheck::Part::c:
      return "c";
  }
  return "?";
}

Vector apply_dQ(const ConeProgramData& data, const ProgramPerturbation& p,
                const Vector& pi) {
  check_perturbation(data, p);
  const int n = data.n();
  const int m = data.m();
  const Vector pu = pi.head(n);
  const Vector pv = pi.segment(n, m);
  const double pw = pi[n + m];

  Vector g(n + m + 1);
  g.head(n) = data.A().multiply_transpose(p.dA, pv) + p.dc * pw;
  g.segment(n, m) = -data.A().multiply(p.dA, pu) + p.db * pw;
  g[n + m] = -p.dc.dot(pu) - p.db.dot(pv);
  return g;
}

ProgramPerturbation extract_dQ(const ConeProgramData& data, const Vector& g,
                               const Vector& pi, Execution exec) {
  const int n = data.n();
  const int m = data.m();
  if (g.size() != data.N() || pi.size() != data.N()) {
    throw InputError("extract_dQ: vectors must have length N");
  }
  const Vector gu = g.head(n);
  const Vector gv = g.segment(n, m);
  const double gw = g[n + m];
  const Vector pu = pi.head(n);
  const Vector pv = pi.segment(n, m);
  const double pw = pi[n + m];

  ProgramPerturbation out;
  // dA = dQ₁₂ᵀ − dQ₂₁ on the pattern: π_v[i] g_u[j] − g_v[i] π_u[j].
  const auto& A = data.A();
  if (exec == Execution::Parallel) {
    kernels::pattern_outer_difference(A.row_indices(), A.col_indices(), pv, gu,
                                      gv, pu, out.dA);
  } else {
    kernels::serial::pattern_outer_difference(A.row_indices(), A.col_indices(),
                                              pv, gu, gv, pu, out.dA);
  }
  out.db = gv * pw - pv * gw;
  out.dc = gu * pw - pu * gw;
  return out;
}

DerivativeHandle::DerivativeHandle(ConeProgramData data, Solution sol,
                                   LinearSolverKind kind, IterativeConfig cfg)
    : data_(std::make_shared<const ConeProgramData>(std::move(data))),
      sol_(std::make_shared<const Solution>(std::move(sol))),
      kind_(kind),
      cfg_(cfg) {
  if (sol_->status != SolveStatus::Solved || !(sol_->z.w() > 0.0)) {
    throw StateError("derivative handle requires a certified solution");
  }
  if (sol_->z.n() != data_->n() || sol_->z.m() != data_->m()) {
    throw InputError("solution dimensions do not match problem data");
  }
  const Vector& z = sol_->z.vector();
  pi_ = project_embedding(z / std::abs(sol_->z.w()), data_->n(),
                          data_->cones());
  jacobian_ = std::make_shared<const ResidualJacobian>(*data_, *sol_);
  if (kind_ == LinearSolverKind::Dense) {
    dense_ = std::make_shared<const DenseFactorization>(
        materialize(residual_jacobian_map()));
  }
}

std::vector<std::string> DerivativeHandle::warnings() const {
  std::vector<std::string> out;
  if (!differentiable()) {
    out.emplace_back(
        "projection is not differentiable at the solution; using a "
        "generalized-Jacobian element");
  }
  return out;
}

LinearMap DerivativeHandle::residual_jacobian_map() const {
  auto jac = jacobian_;
  return LinearMap(
      data_->N(), [jac](const Vector& x) { return jac->apply(x); },
      [jac](const Vector& y) { return jac->apply_adjoint(y); });
}

Vector DerivativeHandle::solve_M(const Vector& rhs,
                                 LinearSolveInfo* info) const {
  if (kind_ == LinearSolverKind::Dense) {
    record(info, {});
    return dense_->solve(rhs);
  }
  LsqrResult res = lsqr_solve(residual_jacobian_map(), rhs, cfg_);
  record(info, {res.iterations, res.residual_norm, res.converged()});
  return std::move(res.x);
}

Vector DerivativeHandle::solve_M_adjoint(const Vector& rhs,
                                         LinearSolveInfo* info) const {
  if (kind_ == LinearSolverKind::Dense) {
    record(info, {});
    return dense_->solve_adjoint(rhs);
  }
  LsqrResult res = lsqr_solve(residual_jacobian_map().adjoint(), rhs, cfg_);
  record(info, {res.iterations, res.residual_norm, res.converged()});
  return std::move(res.x);
}

SolutionPerturbation DerivativeHandle::apply_derivative(
    const ProgramPerturbation& p, LinearSolveInfo* info) const {
  check_perturbation(*data_, p);
  const int n = data_->n();
  const int m = data_->m();
  if (p.dA.isZero(0.0) && p.db.isZero(0.0) && p.dc.isZero(0.0)) {
    record(info, {});
    return {Vector::Zero(n), Vector::Zero(m), Vector::Zero(m)};
  }
  const Vector g = apply_dQ(*data_, p, pi_);
  // Ds(Q) = −M⁻¹ D_Q N.
  const Vector dz = -solve_M(g, info);
  SolutionTriple d =
      apply_dphi(*sol_, jacobian_->projection_jacobian().cone(), dz);
  return {std::move(d.x), std::move(d.y), std::move(d.s)};
}

ProgramPerturbation DerivativeHandle::apply_adjoint_derivative(
    const SolutionPerturbation& q, LinearSolveInfo* info) const {
  const Vector dz = apply_dphi_adjoint(
      *sol_, jacobian_->projection_jacobian().cone(), q.dx, q.dy, q.ds);
  if (dz.isZero(0.0)) {
    record(info, {});
    return zero_program_perturbation(*data_);
  }
  const Vector g = -solve_M_adjoint(dz, info);
  return extract_dQ(*data_, g, pi_);
}

GradientCheckReport gradient_check(const DerivativeHandle& handle,
                                   const SolverConfig& solver_cfg,
                                   int samples, double step,
                                   std::uint64_t seed) {
  if (samples < 1 || !(step > 0.0)) {
    throw InputError("gradient_check: samples must be >= 1 and step > 0");
  }
  const ConeProgramData& data = handle.data();
  const int nnz = data.A().nnz();
  const int m = data.m();
  const int n = data.n();
  const int total = nnz + m + n;

  std::vector<int> all(total);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> picked;
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked),
              std::min(samples, total), rng);

  auto perturbed = [&](int coord, double delta) {
    Vector vals = data.A().values();
    Vector b = data.b();
    Vector c = data.c();
    if (coord < nnz) {
      vals[coord] += delta;
    } else if (coord < nnz + m) {
      b[coord - nnz] += delta;
    } else {
      c[coord - nnz - m] += delta;
    }
    return ConeProgramData(data.A().with_values(std::move(vals)), std::move(b),
                           std::move(c), data.cones());
  };
  auto stack = [](const Vector& x, const Vector& y, const Vector& s) {
    Vector out(x.size() + y.size() + s.size());
    out << x, y, s;
    return out;
  };

  GradientCheckReport report;
  report.step = step;
  report.samples = static_cast<int>(picked.size());
  for (int coord : picked) {
    CoordinateCheck check{};
    if (coord < nnz) {
      check.part = CoordinateCheck::Part::A;
      check.index = coord;
    } else if (coord < nnz + m) {
      check.part = CoordinateCheck::Part::b;
      check.index = coord - nnz;
    } else {
      check.part = CoordinateCheck::Part::c;
      check.index = coord - nnz - m;
    }

    const Solution plus = solve(perturbed(coord, step), solver_cfg);
    const Solution minus = solve(perturbed(coord, -step), solver_cfg);
    if (plus.status != SolveStatus::Solved ||
        minus.status != SolveStatus::Solved) {
      check.skipped = true;
      check.rel_error = std::numeric_limits<double>::quiet_NaN();
      ++report.skipped;
      report.coordinates.push_back(check);
      continue;
    }
    const Vector fd = (stack(plus.x, plus.y, plus.s) -
                       stack(minus.x, minus.y, minus.s)) /
                      (2.0 * step);

    ProgramPerturbation unit = zero_program_perturbation(data);
    if (check.part == CoordinateCheck::Part::A) {
      unit.dA[check.index] = 1.0;
    } else if (check.part == CoordinateCheck::Part::b) {
      unit.db[check.index] = 1.0;
    } else {
      unit.dc[check.index] = 1.0;
    }
    const SolutionPerturbation d = handle.apply_derivative(unit);
    const Vector analytic = stack(d.dx, d.dy, d.ds);

    check.skipped = false;
    check.rel_error = (analytic - fd).lpNorm<Eigen::Infinity>() /
                      std::max(fd.lpNorm<Eigen::Infinity>(),
                               kFiniteDifferenceFloor);
    report.max_rel_error = std::max(report.max_rel_error, check.rel_error);
    report.coordinates.push_back(check);
  }
  return report;
}

}  // namespace conediff
