#include "conediff/linop.hpp"

#include <memory>
#include <string>

#include "conediff/errors.hpp"

namespace conediff {
namespace {

constexpr double kSingularRcond = 1e-12;
// Pivots below this fraction of the largest count as zero.
constexpr double kRankThreshold = 1e-10;

void check_guard(int dim, int guard) {
  if (dim > guard) {
    throw SizeError("dense materialization of a " + std::to_string(dim) +
                    "-dimensional map exceeds the guard of " +
                    std::to_string(guard) + "; use lsqr_solve");
  }
}

}  // namespace

LinearMap LinearMap::identity(int dimension) {
  auto same = [](const Vector& x) { return x; };
  return LinearMap(dimension, same, same);
}

LinearMap LinearMap::from_dense(Matrix matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InputError("LinearMap::from_dense: matrix is not square");
  }
  const int dim = static_cast<int>(matrix.rows());
  auto shared = std::make_shared<const Matrix>(std::move(matrix));
  return LinearMap(
      dim, [shared](const Vector& x) -> Vector { return *shared * x; },
      [shared](const Vector& y) -> Vector {
        return shared->transpose() * y;
      });
}

Matrix materialize(const LinearMap& map, int guard) {
  const int dim = map.dimension();
  check_guard(dim, guard);
  Matrix out(dim, dim);
  Vector e = Vector::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    e[i] = 1.0;
    out.col(i) = map.apply(e);
    e[i] = 0.0;
  }
  return out;
}

DenseFactorization::DenseFactorization(Matrix matrix)
    : matrix_(std::move(matrix)) {
  Eigen::PartialPivLU<Matrix> lu(matrix_);
  if (lu.rcond() > kSingularRcond) {
    factor_ = std::move(lu);
    return;
  }
  MinNorm d;
  d.forward.setThreshold(kRankThreshold);
  d.adjoint.setThreshold(kRankThreshold);
  d.forward.compute(matrix_);
  d.adjoint.compute(matrix_.transpose());
  factor_ = std::move(d);
}

Vector DenseFactorization::solve(const Vector& rhs) const {
  if (rhs.size() != matrix_.rows()) {
    throw InputError("DenseFactorization::solve: dimension mismatch");
  }
  if (const auto* lu = std::get_if<Eigen::PartialPivLU<Matrix>>(&factor_)) {
    return lu->solve(rhs);
  }
  const auto& min_norm = std::get<MinNorm>(factor_);
  return min_norm.forward.solve(rhs);
}

Vector DenseFactorization::solve_adjoint(const Vector& rhs) const {
  if (rhs.size() != matrix_.rows()) {
    throw InputError("DenseFactorization::solve_adjoint: dimension mismatch");
  }
  if (const auto* lu = std::get_if<Eigen::PartialPivLU<Matrix>>(&factor_)) {
    return lu->transpose().solve(rhs);
  }
  const auto& min_norm = std::get<MinNorm>(factor_);
  return min_norm.adjoint.solve(rhs);
}

Vector dense_solve(const LinearMap& map, const Vector& rhs, int guard) {
  if (rhs.size() != map.dimension()) {
    throw InputError("dense_solve: rhs length does not match map dimension");
  }
  return DenseFactorization(materialize(map, guard)).solve(rhs);
}

}  // namespace conediff
