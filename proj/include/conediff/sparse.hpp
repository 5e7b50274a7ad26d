#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace conediff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Compressed (row- or column-major) view over a coordinate pattern.
/// `pos[k]` is the pattern position of the k-th compressed entry, so one index
/// serves any value array laid out in pattern order.
struct CompressedIndex {
  std::vector<int> ptr;
  std::vector<int> idx;
  std::vector<int> pos;
};

/// Sparse matrix with a fixed coordinate pattern (the set Ω). Values are kept
/// in the order the pattern was supplied; perturbations of the matrix reuse the
/// same ordering, so "pattern order" is the only layout callers ever see.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_idx,
               std::vector<int> col_idx, Vector values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(row_idx_.size()); }

  const std::vector<int>& row_indices() const { return row_idx_; }
  const std::vector<int>& col_indices() const { return col_idx_; }
  const Vector& values() const { return values_; }

  const CompressedIndex& by_row() const { return csr_; }
  const CompressedIndex& by_col() const { return csc_; }

  Vector multiply(const Vector& x) const { return multiply(values_, x); }
  Vector multiply_transpose(const Vector& y) const {
    return multiply_transpose(values_, y);
  }

  // Products with the same pattern but different values (e.g. dA).
  Vector multiply(const Vector& pattern_values, const Vector& x) const;
  Vector multiply_transpose(const Vector& pattern_values,
                            const Vector& y) const;

  /// Pattern position of (row, col), if present.
  std::optional<int> find(int row, int col) const;

  SparseMatrix with_values(Vector values) const;

  Matrix to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_idx_;
  std::vector<int> col_idx_;
  Vector values_;
  CompressedIndex csr_;
  CompressedIndex csc_;
};

}  // namespace conediff
