#include "conediff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "conediff/errors.hpp"

namespace conediff {
namespace {

constexpr double kInfeasibleTol = 1e-7;
constexpr double kRefineTrigger = 1e-4;
// Iterations after which a stalled run tries refinement regardless of score.
constexpr int kRefinePeriod = 200;
constexpr int kBacktracks = 8;

// (I + Q)⁻¹ via the factorization of I + AᵀA and a rank-one correction for
// the homogenizing coordinate.
class EmbeddingSystem {
 public:
  explicit EmbeddingSystem(const ConeProgramData& data) : data_(data) {
    const int n = data.n();
    const Eigen::SparseMatrix<double> a = data.A().to_eigen();
    Eigen::SparseMatrix<double> gram = a.transpose() * a;
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    gram += eye;
    chol_.compute(gram);
    if (chol_.info() != Eigen::Success) {
      throw std::runtime_error("factorization of I + AᵀA failed");
    }
    solve_block(data.c(), data.b(), hx_, hy_);
    denom_ = 1.0 + data.c().dot(hx_) + data.b().dot(hy_);
  }

  Vector solve(const Vector& rhs) const {
    const int n = data_.n();
    const int m = data_.m();
    Vector px, py;
    solve_block(rhs.head(n), rhs.segment(n, m), px, py);
    const double tau =
        (rhs[n + m] + data_.c().dot(px) + data_.b().dot(py)) / denom_;
    Vector out(n + m + 1);
    out << px - tau * hx_, py - tau * hy_, tau;
    return out;
  }

 private:
  // [[I, Aᵀ], [−A, I]] (x, y) = (r1, r2).
  void solve_block(const Vector& r1, const Vector& r2, Vector& x,
                   Vector& y) const {
    x = chol_.solve(r1 - data_.A().multiply_transpose(r2));
    y = r2 + data_.A().multiply(x);
  }

  const ConeProgramData& data_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol_;
  Vector hx_;
  Vector hy_;
  double denom_ = 1.0;
};

struct Candidate {
  Vector z;  // w = 1
  SolutionTriple triple;
  KktResiduals residuals;
  double score = std::numeric_limits<double>::infinity();
};

// Largest KKT residual relative to the data scale.
double score_of(const KktResiduals& r, double scale) {
  return std::max({r.primal, r.dual, r.gap, r.objective_gap}) / scale;
}

Candidate evaluate(const ConeProgramData& data, Vector z) {
  Candidate cand;
  const EmbeddingPoint point(z, data.n(), data.m());
  cand.triple = construct_solution(point, data.cones());
  cand.residuals = kkt_residuals(data, cand.triple.x, cand.triple.y,
                                 cand.triple.s);
  cand.score = score_of(cand.residuals, kkt_scale(data));
  cand.z = std::move(z);
  return cand;
}

Solution finish(const ConeProgramData& data, Candidate cand, SolveStatus status,
                int iterations) {
  Solution sol;
  sol.x = std::move(cand.triple.x);
  sol.y = std::move(cand.triple.y);
  sol.s = std::move(cand.triple.s);
  sol.residual_map_norm = residual_map(data, cand.z).norm();
  sol.z = EmbeddingPoint(std::move(cand.z), data.n(), data.m());
  sol.status = status;
  sol.residuals = cand.residuals;
  sol.iterations = iterations;
  return sol;
}

// Placeholder for runs that never produced a usable iterate.
Solution unsolved(const ConeProgramData& data, SolveStatus status,
                  int iterations) {
  Solution sol;
  sol.x = Vector::Zero(data.n());
  sol.y = Vector::Zero(data.m());
  sol.s = Vector::Zero(data.m());
  sol.z = EmbeddingPoint(Vector::Zero(data.N()), data.n(), data.m());
  sol.status = status;
  sol.iterations = iterations;
  sol.residual_map_norm = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

bool certified(const Candidate& cand, double map_norm, double tol) {
  return cand.score <= tol && map_norm <= 10.0 * tol;
}

}  // namespace

RefineResult refine(const ConeProgramData& data, const Vector& z0, int steps) {
  const int n = data.n();
  const int dim = data.N();
  if (z0.size() != dim) throw InputError("refine: z has wrong length");
  if (!(z0[dim - 1] > 0.0)) throw DomainError("refine: w must be positive");

  RefineResult out;
  out.z = z0 / z0[dim - 1];
  Vector r = residual_map(data, out.z);
  double rnorm = r.norm();
  out.residual_norms.push_back(rnorm);

  IterativeConfig lsqr_cfg;
  lsqr_cfg.atol = 1e-14;
  lsqr_cfg.btol = 1e-14;

  for (int step = 0; step < steps && rnorm > 0.0; ++step) {
    const EmbeddingProjectionJacobian dpi =
        dproject_embedding(out.z, n, data.cones());
    const double w = out.z[dim - 1];
    const Vector residual = r;
    LinearMap jac(
        dim,
        [&](const Vector& dz) -> Vector {
          const Vector p = dpi.apply(dz);
          return (apply_Q(data, p) - p + dz - residual * dz[dim - 1]) / w;
        },
        [&](const Vector& q) -> Vector {
          Vector out_vec = dpi.apply(apply_Q_adjoint(data, q) - q) + q;
          out_vec[dim - 1] -= residual.dot(q);
          return out_vec / w;
        });
    const LsqrResult step_solve = lsqr_solve(jac, -r, lsqr_cfg);

    bool accepted = false;
    double t = 1.0;
    for (int k = 0; k < kBacktracks; ++k, t *= 0.5) {
      Vector trial = out.z + t * step_solve.x;
      const double tw = trial[dim - 1];
      if (!(tw > 0.0)) continue;
      trial /= tw;
      const Vector trial_r = residual_map(data, trial);
      const double trial_norm = trial_r.norm();
      if (trial_norm < rnorm) {
        out.z = std::move(trial);
        r = trial_r;
        rnorm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    out.residual_norms.push_back(rnorm);
  }
  return out;
}

Solution solve(const ConeProgramData& data, const SolverConfig& cfg) {
  if (cfg.max_iterations < 1 || cfg.tolerance <= 0.0 || cfg.refine_steps < 0 ||
      cfg.relaxation <= 0.0 || cfg.relaxation >= 2.0 ||
      cfg.check_interval < 1) {
    throw InputError("solver configuration values out of range");
  }
  const int n = data.n();
  const int m = data.m();
  const int dim = data.N();
  const double alpha = cfg.relaxation;

  const EmbeddingSystem system(data);

  Vector u = Vector::Zero(dim);
  Vector v = Vector::Zero(dim);
  u[dim - 1] = 1.0;
  v[dim - 1] = 1.0;

  Candidate best;
  double last_refined_score = std::numeric_limits<double>::infinity();
  int last_refined_iter = 0;

  // Restart the splitting iteration from a point of the original problem.
  auto warm_start = [&](const Candidate& cand) {
    const SolutionTriple& t = cand.triple;
    u << t.x, t.y, 1.0;
    v << Vector::Zero(n), t.s, 0.0;
  };

  auto try_refine = [&](const Candidate& cand) -> Candidate {
    Candidate refined =
        evaluate(data, refine(data, cand.z, cfg.refine_steps).z);
    return refined.score <= cand.score ? refined : cand;
  };

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const Vector ut = system.solve(u + v);
    const Vector uh = alpha * ut + (1.0 - alpha) * u;
    Vector u_next = project_embedding(uh - v, n, data.cones());
    v += u_next - uh;
    u = std::move(u_next);

    if (iter % cfg.check_interval != 0 && iter != cfg.max_iterations) continue;

    const double tau = u[dim - 1];
    const double kappa = v[dim - 1];
    const double unorm = u.norm();

    // Certificates of infeasibility (τ → 0, κ > 0).
    if (tau < kappa) {
      const Vector yc = u.segment(n, m);
      const double by = data.b().dot(yc);
      if (by < 0.0 &&
          data.A().multiply_transpose(yc).norm() <= kInfeasibleTol * -by) {
        return unsolved(data, SolveStatus::InfeasibleOrUnbounded, iter);
      }
      const Vector xc = u.head(n);
      const double cx = data.c().dot(xc);
      if (cx < 0.0 &&
          (data.A().multiply(xc) + v.segment(n, m)).norm() <=
              kInfeasibleTol * -cx) {
        return unsolved(data, SolveStatus::InfeasibleOrUnbounded, iter);
      }
    }
    if (!(tau > 0.0)) continue;

    Vector z(dim);
    z << u.head(n) / tau, (u.segment(n, m) - v.segment(n, m)) / tau, 1.0;
    Candidate cand = evaluate(data, std::move(z));

    const bool stalled = iter - last_refined_iter >= kRefinePeriod;
    if (cfg.refine_steps > 0 &&
        (cand.score <= cfg.tolerance || stalled ||
         (cand.score <= kRefineTrigger &&
          cand.score <= 0.1 * last_refined_score))) {
      last_refined_score = cand.score;
      last_refined_iter = iter;
      Candidate refined = try_refine(cand);
      const bool improved = refined.score < cand.score;
      cand = std::move(refined);
      const double map_norm = residual_map(data, cand.z).norm();
      if (certified(cand, map_norm, cfg.tolerance)) {
        return finish(data, std::move(cand), SolveStatus::Solved, iter);
      }
      if (improved) {
        // Continue from the refined point; successive short refinements then
        // chain into a full Gauss–Newton solve.
        warm_start(cand);
        if (cand.score < best.score) best = cand;
        continue;
      }
    } else if (cfg.refine_steps == 0 && cand.score <= cfg.tolerance) {
      const double map_norm = residual_map(data, cand.z).norm();
      if (certified(cand, map_norm, cfg.tolerance)) {
        return finish(data, std::move(cand), SolveStatus::Solved, iter);
      }
    }
    if (cand.score < best.score) best = cand;

    // Homogeneity lets us keep τ in [0.1, 10] without changing the iteration.
    if ((tau < 0.1 || tau > 10.0) && tau > 1e-6 * unorm) {
      u /= tau;
      v /= tau;
    }
  }

  if (!std::isfinite(best.score)) {
    return unsolved(data, SolveStatus::MaxIters, cfg.max_iterations);
  }
  return finish(data, std::move(best), SolveStatus::MaxIters,
                cfg.max_iterations);
}

Solution accept_solution(const ConeProgramData& data, const Vector& x,
                         const Vector& y, const Vector& s, double tol) {
  const EmbeddingPoint point = embed_solution(data, x, y, s, tol);
  Candidate cand = evaluate(data, point.vector());
  return finish(data, std::move(cand), SolveStatus::Solved, 0);
}

}  // namespace conediff
