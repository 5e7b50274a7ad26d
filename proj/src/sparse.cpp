#include "conediff/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "conediff/errors.hpp"
#include "conediff/kernels.hpp"

namespace conediff {
namespace {

CompressedIndex compress(int outer_size, const std::vector<int>& outer,
                         const std::vector<int>& inner) {
  CompressedIndex index;
  const auto nnz = outer.size();
  index.ptr.assign(outer_size + 1, 0);
  for (int o : outer) ++index.ptr[o + 1];
  std::partial_sum(index.ptr.begin(), index.ptr.end(), index.ptr.begin());

  index.idx.resize(nnz);
  index.pos.resize(nnz);
  std::vector<int> next(index.ptr.begin(), index.ptr.end() - 1);
  for (std::size_t k = 0; k < nnz; ++k) {
    const int slot = next[outer[k]]++;
    index.idx[slot] = inner[k];
    index.pos[slot] = static_cast<int>(k);
  }
  return index;
}

}  // namespace

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_idx,
                           std::vector<int> col_idx, Vector values)
    : rows_(rows),
      cols_(cols),
      row_idx_(std::move(row_idx)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) {
    throw InputError("sparse matrix dimensions must be nonnegative");
  }
  if (row_idx_.size() != col_idx_.size() ||
      row_idx_.size() != static_cast<std::size_t>(values_.size())) {
    throw InputError("sparse matrix rows/cols/vals lengths differ");
  }
  for (std::size_t k = 0; k < row_idx_.size(); ++k) {
    if (row_idx_[k] < 0 || row_idx_[k] >= rows_ || col_idx_[k] < 0 ||
        col_idx_[k] >= cols_) {
      throw InputError("sparse matrix entry " + std::to_string(k) +
                       " out of range");
    }
  }
  csr_ = compress(rows_, row_idx_, col_idx_);
  csc_ = compress(cols_, col_idx_, row_idx_);

  // Duplicates show up as repeated inner indices inside one compressed row.
  for (int r = 0; r < rows_; ++r) {
    std::vector<int> seen(csr_.idx.begin() + csr_.ptr[r],
                          csr_.idx.begin() + csr_.ptr[r + 1]);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw InputError("duplicate sparse matrix entry in row " +
                       std::to_string(r));
    }
  }
}

Vector SparseMatrix::multiply(const Vector& pattern_values,
                              const Vector& x) const {
  if (x.size() != cols_ || pattern_values.size() != nnz()) {
    throw InputError("sparse multiply: dimension mismatch");
  }
  Vector out(rows_);
  kernels::compressed_multiply(csr_, pattern_values, x, out);
  return out;
}

Vector SparseMatrix::multiply_transpose(const Vector& pattern_values,
                                        const Vector& y) const {
  if (y.size() != rows_ || pattern_values.size() != nnz()) {
    throw InputError("sparse transpose multiply: dimension mismatch");
  }
  Vector out(cols_);
  kernels::compressed_multiply(csc_, pattern_values, y, out);
  return out;
}

std::optional<int> SparseMatrix::find(int row, int col) const {
  if (row < 0 || row >= rows_) return std::nullopt;
  for (int k = csr_.ptr[row]; k < csr_.ptr[row + 1]; ++k) {
    if (csr_.idx[k] == col) return csr_.pos[k];
  }
  return std::nullopt;
}

SparseMatrix SparseMatrix::with_values(Vector values) const {
  if (values.size() != nnz()) {
    throw InputError("with_values: expected " + std::to_string(nnz()) +
                     " values");
  }
  SparseMatrix copy = *this;
  copy.values_ = std::move(values);
  return copy;
}

Matrix SparseMatrix::to_dense() const {
  Matrix dense = Matrix::Zero(rows_, cols_);
  for (int k = 0; k < nnz(); ++k) dense(row_idx_[k], col_idx_[k]) = values_[k];
  return dense;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(nnz());
  for (int k = 0; k < nnz(); ++k) {
    triplets.emplace_back(row_idx_[k], col_idx_[k], values_[k]);
  }
  Eigen::SparseMatrix<double> out(rows_, cols_);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace conediff
