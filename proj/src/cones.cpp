#include "conediff/cones.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "conediff/errors.hpp"
#include "conediff/kernels.hpp"

namespace conediff {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Relative tolerances for deciding that a point sits on a kink.
constexpr double kNonnegKinkTol = 1e-12;
constexpr double kSocKinkTol = 1e-10;
constexpr double kEigenCollisionTol = 1e-10;

template <typename... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_length(const Vector& v, const ConeSpec& spec, const char* what) {
  if (v.size() != spec.dimension()) {
    throw InputError(std::string(what) + ": vector length " +
                     std::to_string(v.size()) + " does not match cone dimension " +
                     std::to_string(spec.dimension()));
  }
}

// Runs body(i) for every block, over OpenMP threads when allowed.
template <typename Body>
void for_each_block(int count, Execution exec, Body&& body) {
  const bool parallel = exec == Execution::Parallel && count > 1;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < count; ++i) body(i);
}

void project_soc(const Eigen::Ref<const Vector>& v, Eigen::Ref<Vector> out) {
  const double t = v[0];
  const int rest = static_cast<int>(v.size()) - 1;
  const double nx = v.tail(rest).norm();
  if (nx <= t) {
    out = v;
  } else if (nx <= -t) {
    out.setZero();
  } else {
    const double alpha = 0.5 * (t + nx);
    out[0] = alpha;
    out.tail(rest) = (alpha / nx) * v.tail(rest);
  }
}

Matrix project_psd_matrix(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() *
         eig.eigenvectors().transpose();
}

detail::BlockJacobian soc_jacobian(const Eigen::Ref<const Vector>& v,
                                   bool& differentiable) {
  const double t = v[0];
  const int rest = static_cast<int>(v.size()) - 1;
  const double nx = v.tail(rest).norm();
  const double tol = kSocKinkTol * (1.0 + v.norm());
  const bool on_kink = std::abs(nx - std::abs(t)) <= tol;

  if (!on_kink) {
    if (nx < t) return detail::IdentityBlock{};
    if (nx < -t) return detail::ZeroBlock{};
  } else {
    differentiable = false;
  }
  if (rest == 0) {
    // One-dimensional SOC is the half-line; at t = 0 use the zero slope.
    return detail::ZeroBlock{};
  }
  detail::SocBlock block;
  if (nx > 0.0) {
    block.unit = v.tail(rest) / nx;
    block.ratio = t / nx;
  } else {
    block.unit = Vector::Unit(rest, 0);
    block.ratio = 0.0;
  }
  return block;
}

detail::BlockJacobian psd_jacobian(const Eigen::Ref<const Vector>& v,
                                   bool& differentiable) {
  const Matrix sym = unvectorize_symmetric(v);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& lambda = eig.eigenvalues();
  const int s = static_cast<int>(lambda.size());
  const double tol = kEigenCollisionTol * (1.0 + sym.norm());

  for (int i = 0; i < s; ++i) {
    if (std::abs(lambda[i]) <= tol) differentiable = false;
  }

  detail::PsdBlock block;
  block.eigvecs = eig.eigenvectors();
  block.coeffs.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double li = lambda[i];
      const double lj = lambda[j];
      double coeff;
      if (std::abs(li - lj) < tol) {
        const double mid = 0.5 * (li + lj);
        coeff = mid > tol ? 1.0 : (mid < -tol ? 0.0 : 0.5);
      } else {
        coeff = (std::max(li, 0.0) - std::max(lj, 0.0)) / (li - lj);
      }
      block.coeffs(i, j) = coeff;
    }
  }
  return block;
}

}  // namespace

int ConeBlock::dim() const {
  return kind == ConeKind::Psd ? psd_vec_size(size) : size;
}

int psd_side_from_vec_size(int len) {
  const int side =
      static_cast<int>(std::lround((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
  if (len < 0 || psd_vec_size(side) != len) {
    throw InputError("length " + std::to_string(len) +
                     " is not a triangular number");
  }
  return side;
}

Vector vectorize_symmetric(const Matrix& sym) {
  if (sym.rows() != sym.cols()) {
    throw InputError("vectorize_symmetric: matrix is not square");
  }
  const int s = static_cast<int>(sym.rows());
  Vector out(psd_vec_size(s));
  int k = 0;
  for (int col = 0; col < s; ++col) {
    for (int row = col; row < s; ++row) {
      out[k++] = row == col ? sym(row, col) : kSqrt2 * sym(row, col);
    }
  }
  return out;
}

Matrix unvectorize_symmetric(const Eigen::Ref<const Vector>& vec) {
  const int s = psd_side_from_vec_size(static_cast<int>(vec.size()));
  Matrix out(s, s);
  int k = 0;
  for (int col = 0; col < s; ++col) {
    for (int row = col; row < s; ++row) {
      if (row == col) {
        out(row, col) = vec[k];
      } else {
        out(row, col) = vec[k] / kSqrt2;
        out(col, row) = out(row, col);
      }
      ++k;
    }
  }
  return out;
}

ConeSpec::ConeSpec(int zero, int nonneg, std::vector<int> soc,
                   std::vector<int> psd)
    : zero_(zero), nonneg_(nonneg), soc_(std::move(soc)), psd_(std::move(psd)) {
  if (zero_ < 0 || nonneg_ < 0) {
    throw InputError("cone sizes must be nonnegative");
  }
  int offset = 0;
  auto push = [&](ConeKind kind, int size) {
    blocks_.push_back({kind, size, offset});
    offset += blocks_.back().dim();
  };
  if (zero_ > 0) push(ConeKind::Zero, zero_);
  if (nonneg_ > 0) push(ConeKind::Nonneg, nonneg_);
  for (std::size_t i = 0; i < soc_.size(); ++i) {
    if (soc_[i] < 1) {
      throw InputError("soc[" + std::to_string(i) + "] must be >= 1");
    }
    push(ConeKind::SecondOrder, soc_[i]);
  }
  for (std::size_t i = 0; i < psd_.size(); ++i) {
    if (psd_[i] < 1) {
      throw InputError("psd[" + std::to_string(i) + "] must be >= 1");
    }
    push(ConeKind::Psd, psd_[i]);
  }
  dimension_ = offset;
}

Vector project_dual_cone(const Vector& v, const ConeSpec& spec,
                         Execution exec) {
  check_length(v, spec, "project_dual_cone");
  Vector out(v.size());
  const auto& blocks = spec.blocks();
  for_each_block(static_cast<int>(blocks.size()), exec, [&](int i) {
    const ConeBlock& blk = blocks[i];
    const auto in = v.segment(blk.offset, blk.dim());
    auto dst = out.segment(blk.offset, blk.dim());
    switch (blk.kind) {
      case ConeKind::Zero:
        dst = in;
        break;
      case ConeKind::Nonneg: {
        Vector tmp;
        if (exec == Execution::Parallel) {
          kernels::positive_part(in, tmp);
        } else {
          kernels::serial::positive_part(in, tmp);
        }
        dst = tmp;
        break;
      }
      case ConeKind::SecondOrder:
        project_soc(in, dst);
        break;
      case ConeKind::Psd:
        dst = vectorize_symmetric(project_psd_matrix(unvectorize_symmetric(in)));
        break;
    }
  });
  return out;
}

double distance_to_dual_cone(const Vector& v, const ConeSpec& spec) {
  return (project_dual_cone(v, spec) - v).norm();
}

double distance_to_primal_cone(const Vector& v, const ConeSpec& spec) {
  return project_dual_cone(-v, spec).norm();
}

ProjectionJacobian::ProjectionJacobian(ConeSpec spec,
                                       std::vector<detail::BlockJacobian> blocks,
                                       bool differentiable)
    : spec_(std::move(spec)),
      blocks_(std::move(blocks)),
      differentiable_(differentiable) {}

Vector ProjectionJacobian::apply(const Vector& dv, Execution exec) const {
  check_length(dv, spec_, "ProjectionJacobian::apply");
  Vector out(dv.size());
  const auto& cone_blocks = spec_.blocks();
  for_each_block(static_cast<int>(cone_blocks.size()), exec, [&](int i) {
    const ConeBlock& blk = cone_blocks[i];
    const auto in = dv.segment(blk.offset, blk.dim());
    auto dst = out.segment(blk.offset, blk.dim());
    std::visit(
        Overloaded{
            [&](const detail::IdentityBlock&) { dst = in; },
            [&](const detail::ZeroBlock&) { dst.setZero(); },
            [&](const detail::DiagonalBlock& b) {
              dst = b.diag.cwiseProduct(in);
            },
            [&](const detail::SocBlock& b) {
              const int rest = blk.dim() - 1;
              const double dt = in[0];
              const auto dx = in.tail(rest);
              const double proj = b.unit.dot(dx);
              dst[0] = 0.5 * (dt + proj);
              dst.tail(rest) = 0.5 * (b.unit * dt + (1.0 + b.ratio) * dx -
                                      b.ratio * proj * b.unit);
            },
            [&](const detail::PsdBlock& b) {
              const Matrix h = unvectorize_symmetric(in);
              const Matrix rotated = b.eigvecs.transpose() * h * b.eigvecs;
              const Matrix scaled = b.coeffs.cwiseProduct(rotated);
              dst = vectorize_symmetric(b.eigvecs * scaled *
                                        b.eigvecs.transpose());
            },
        },
        blocks_[i]);
  });
  return out;
}

ProjectionJacobian dproject_dual_cone(const Vector& v, const ConeSpec& spec,
                                      Execution exec) {
  check_length(v, spec, "dproject_dual_cone");
  const auto& cone_blocks = spec.blocks();
  const int count = static_cast<int>(cone_blocks.size());
  std::vector<detail::BlockJacobian> blocks(count);
  std::vector<char> smooth(count, 1);

  for_each_block(count, exec, [&](int i) {
    const ConeBlock& blk = cone_blocks[i];
    const auto in = v.segment(blk.offset, blk.dim());
    bool ok = true;
    switch (blk.kind) {
      case ConeKind::Zero:
        blocks[i] = detail::IdentityBlock{};
        break;
      case ConeKind::Nonneg: {
        const double tol = kNonnegKinkTol * (1.0 + in.norm());
        detail::DiagonalBlock diag{Vector(blk.dim())};
        for (int k = 0; k < blk.dim(); ++k) {
          diag.diag[k] = in[k] > 0.0 ? 1.0 : 0.0;
          if (std::abs(in[k]) <= tol) ok = false;
        }
        blocks[i] = std::move(diag);
        break;
      }
      case ConeKind::SecondOrder:
        blocks[i] = soc_jacobian(in, ok);
        break;
      case ConeKind::Psd:
        blocks[i] = psd_jacobian(in, ok);
        break;
    }
    smooth[i] = ok ? 1 : 0;
  });

  bool differentiable = true;
  for (char s : smooth) differentiable = differentiable && s;
  return ProjectionJacobian(spec, std::move(blocks), differentiable);
}

Vector project_embedding(const Vector& z, int n, const ConeSpec& spec) {
  const int m = spec.dimension();
  if (n < 0 || z.size() != n + m + 1) {
    throw InputError("project_embedding: expected length " +
                     std::to_string(n + m + 1) + ", got " +
                     std::to_string(z.size()));
  }
  Vector out(z.size());
  out.head(n) = z.head(n);
  out.segment(n, m) = project_dual_cone(z.segment(n, m), spec);
  out[n + m] = std::max(z[n + m], 0.0);
  return out;
}

EmbeddingProjectionJacobian::EmbeddingProjectionJacobian(
    int n, ProjectionJacobian cone, double last, bool last_differentiable)
    : n_(n),
      cone_(std::move(cone)),
      last_(last),
      last_differentiable_(last_differentiable) {}

Vector EmbeddingProjectionJacobian::apply(const Vector& dz) const {
  const int m = cone_.dimension();
  if (dz.size() != dimension()) {
    throw InputError("EmbeddingProjectionJacobian::apply: dimension mismatch");
  }
  Vector out(dz.size());
  out.head(n_) = dz.head(n_);
  out.segment(n_, m) = cone_.apply(dz.segment(n_, m));
  out[n_ + m] = last_ * dz[n_ + m];
  return out;
}

EmbeddingProjectionJacobian dproject_embedding(const Vector& z, int n,
                                               const ConeSpec& spec) {
  const int m = spec.dimension();
  if (n < 0 || z.size() != n + m + 1) {
    throw InputError("dproject_embedding: expected length " +
                     std::to_string(n + m + 1) + ", got " +
                     std::to_string(z.size()));
  }
  const double w = z[n + m];
  return EmbeddingProjectionJacobian(
      n, dproject_dual_cone(z.segment(n, m), spec), w > 0.0 ? 1.0 : 0.0,
      w != 0.0);
}

}  // namespace conediff
