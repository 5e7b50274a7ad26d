#pragma once

#include <variant>
#include <vector>

#include "conediff/sparse.hpp"

namespace conediff {

enum class ConeKind { Zero, Nonneg, SecondOrder, Psd };

/// Whether blockwise loops may fan out over OpenMP threads.
enum class Execution { Serial, Parallel };

struct ConeBlock {
  ConeKind kind;
  /// Dimension for Zero/Nonneg/SecondOrder; matrix side length for Psd.
  int size;
  /// Offset of the block inside the stacked cone vector.
  int offset;

  /// Length of the block's slice of the stacked vector.
  int dim() const;
};

/// Number of entries in the scaled lower-triangular vectorization of an
/// s-by-s symmetric matrix.
constexpr int psd_vec_size(int side) { return side * (side + 1) / 2; }

/// Side length s with psd_vec_size(s) == len; throws InputError otherwise.
int psd_side_from_vec_size(int len);

/// Scaled lower-triangular, column-stacked vectorization: off-diagonal entries
/// are multiplied by sqrt(2) so that <vec(X), vec(Y)> = tr(XY).
Vector vectorize_symmetric(const Matrix& sym);
Matrix unvectorize_symmetric(const Eigen::Ref<const Vector>& vec);

/// K as a Cartesian product, laid out as zero, nonneg, every SOC, every PSD.
class ConeSpec {
 public:
  ConeSpec() = default;
  ConeSpec(int zero, int nonneg, std::vector<int> soc = {},
           std::vector<int> psd = {});

  int zero() const { return zero_; }
  int nonneg() const { return nonneg_; }
  const std::vector<int>& soc() const { return soc_; }
  const std::vector<int>& psd() const { return psd_; }

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  int dimension() const { return dimension_; }

  friend bool operator==(const ConeSpec&, const ConeSpec&) = default;

 private:
  int zero_ = 0;
  int nonneg_ = 0;
  std::vector<int> soc_;
  std::vector<int> psd_;
  std::vector<ConeBlock> blocks_;
  int dimension_ = 0;
};

/// Euclidean projection onto the dual cone K* (the zero cone's dual is the
/// whole space; the other kinds are self-dual).
Vector project_dual_cone(const Vector& v, const ConeSpec& spec,
                         Execution exec = Execution::Parallel);

/// Distance from v to K and to K*. Used for membership tests; the primal
/// projection is recovered via Moreau as v + Π_{K*}(-v).
double distance_to_primal_cone(const Vector& v, const ConeSpec& spec);
double distance_to_dual_cone(const Vector& v, const ConeSpec& spec);

namespace detail {

struct IdentityBlock {};
struct ZeroBlock {};
/// 0/1 diagonal.
struct DiagonalBlock {
  Vector diag;
};
/// Closed form of the SOC projection derivative outside both the cone and
/// its polar:
///   J = 1/2 [[1, x̄ᵀ], [x̄, (1 + t/‖x‖) I - (t/‖x‖) x̄ x̄ᵀ]],  x̄ = x/‖x‖.
struct SocBlock {
  Vector unit;  // x̄
  double ratio;  // t/‖x‖
};
/// DΠ(X)[H] = U (B ∘ (UᵀHU)) Uᵀ.
struct PsdBlock {
  Matrix eigvecs;
  Matrix coeffs;
};

using BlockJacobian =
    std::variant<IdentityBlock, ZeroBlock, DiagonalBlock, SocBlock, PsdBlock>;

}  // namespace detail

/// DΠ_{K*}(v) as a blockwise, self-adjoint linear map. At points where the
/// projection is not differentiable a generalized-Jacobian element is stored
/// and differentiable() reports false.
class ProjectionJacobian {
 public:
  ProjectionJacobian() = default;
  ProjectionJacobian(ConeSpec spec, std::vector<detail::BlockJacobian> blocks,
                     bool differentiable);

  Vector apply(const Vector& dv, Execution exec = Execution::Parallel) const;
  int dimension() const { return spec_.dimension(); }
  bool differentiable() const { return differentiable_; }

  const ConeSpec& spec() const { return spec_; }
  const std::vector<detail::BlockJacobian>& blocks() const { return blocks_; }

 private:
  ConeSpec spec_;
  std::vector<detail::BlockJacobian> blocks_;
  bool differentiable_ = true;
};

ProjectionJacobian dproject_dual_cone(const Vector& v, const ConeSpec& spec,
                                      Execution exec = Execution::Parallel);

/// Projection onto Rⁿ × K* × R₊ of z = (u, v, w).
Vector project_embedding(const Vector& z, int n, const ConeSpec& spec);

/// DΠ(z) = I_n ⊕ DΠ_{K*}(v) ⊕ 1[w > 0].
class EmbeddingProjectionJacobian {
 public:
  EmbeddingProjectionJacobian() = default;
  EmbeddingProjectionJacobian(int n, ProjectionJacobian cone, double last,
                              bool last_differentiable);

  Vector apply(const Vector& dz) const;
  int dimension() const { return n_ + cone_.dimension() + 1; }
  bool differentiable() const {
    return cone_.differentiable() && last_differentiable_;
  }

  const ProjectionJacobian& cone() const { return cone_; }
  double last() const { return last_; }

 private:
  int n_ = 0;
  ProjectionJacobian cone_;
  double last_ = 0.0;
  bool last_differentiable_ = true;
};

EmbeddingProjectionJacobian dproject_embedding(const Vector& z, int n,
                                               const ConeSpec& spec);

}  // namespace conediff
