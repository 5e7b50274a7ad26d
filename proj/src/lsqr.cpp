// LSQR of Paige and Saunders, undamped.

#include <cmath>

#include "conediff/errors.hpp"
#include "conediff/linop.hpp"

namespace conediff {

LsqrResult lsqr_solve(const LinearMap& map, const Vector& rhs,
                      const IterativeConfig& cfg) {
  const int dim = map.dimension();
  if (rhs.size() != dim) {
    throw InputError("lsqr_solve: rhs length does not match map dimension");
  }
  const int max_iter = cfg.max_iterations > 0 ? cfg.max_iterations : 10 * dim;

  LsqrResult result;
  result.x = Vector::Zero(dim);

  Vector u = rhs;
  double beta = u.norm();
  const double bnorm = beta;
  if (beta == 0.0) {
    result.stop = LsqrStop::ZeroRhs;
    return result;
  }
  u /= beta;
  Vector v = map.apply_adjoint(u);
  double alpha = v.norm();
  if (alpha > 0.0) v /= alpha;

  Vector w = v;
  double rhobar = alpha;
  double phibar = beta;
  double anorm = 0.0;
  double ddnorm = 0.0;
  result.residual_norm = beta;

  if (alpha * beta == 0.0) {
    // rhs is orthogonal to the range: x = 0 already minimizes the residual.
    result.stop = LsqrStop::LeastSquares;
    return result;
  }

  result.stop = LsqrStop::IterationLimit;
  for (int itn = 1; itn <= max_iter; ++itn) {
    result.iterations = itn;

    // Continue the bidiagonalization.
    u = map.apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) {
      u /= beta;
      anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);
      v = map.apply_adjoint(u) - beta * v;
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    }

    // Plane rotation eliminating the subdiagonal.
    const double rho = std::hypot(rhobar, beta);
    const double cs = rhobar / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const double tau = sn * phi;

    ddnorm += (w / rho).squaredNorm();
    result.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    const double xnorm = result.x.norm();
    const double acond = anorm * std::sqrt(ddnorm);
    const double rnorm = phibar;
    const double arnorm = alpha * std::abs(tau);
    result.residual_norm = rnorm;
    result.residual_history.push_back(rnorm);

    const double test1 = rnorm / bnorm;
    const double test2 = rnorm > 0.0 ? arnorm / (anorm * rnorm) : 0.0;
    const double test3 = 1.0 / acond;
    const double rtol = cfg.btol + cfg.atol * anorm * xnorm / bnorm;

    if (test1 <= rtol) {
      result.stop = LsqrStop::Residual;
      break;
    }
    if (test2 <= cfg.atol) {
      result.stop = LsqrStop::LeastSquares;
      break;
    }
    if (test3 <= 1.0 / cfg.condition_limit) {
      result.stop = LsqrStop::Condition;
      break;
    }
  }
  return result;
}

}  // namespace conediff
