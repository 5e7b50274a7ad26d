#include <random>

#include <gtest/gtest.h>

#include "conediff/errors.hpp"
#include "conediff/kernels.hpp"
#include "conediff/sparse.hpp"
#include "oracles.hpp"

namespace conediff {
namespace {

using testing::random_vector;

// Pattern in deliberately scrambled order so "pattern order" differs from both
// row- and column-major order.
SparseMatrix random_sparse(int rows, int cols, double density,
                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, int>> coords;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (unif(rng) < density) coords.emplace_back(i, j);
    }
  }
  std::shuffle(coords.begin(), coords.end(), rng);
  std::vector<int> ri, ci;
  for (auto [i, j] : coords) {
    ri.push_back(i);
    ci.push_back(j);
  }
  return SparseMatrix(rows, cols, ri, ci,
                      random_vector(static_cast<int>(coords.size()), rng));
}

TEST(SparseMatrix, ProductsMatchDense) {
  std::mt19937_64 rng(1);
  const SparseMatrix a = random_sparse(30, 20, 0.3, rng);
  const Matrix d = a.to_dense();
  const Vector x = random_vector(20, rng);
  const Vector y = random_vector(30, rng);
  EXPECT_LE((a.multiply(x) - d * x).norm(), 1e-12);
  EXPECT_LE((a.multiply_transpose(y) - d.transpose() * y).norm(), 1e-12);
  EXPECT_LE((Matrix(a.to_eigen()) - d).norm(), 0.0);

  const Vector other = random_vector(a.nnz(), rng);
  const Matrix d2 = a.with_values(other).to_dense();
  EXPECT_LE((a.multiply(other, x) - d2 * x).norm(), 1e-12);
  EXPECT_LE((a.multiply_transpose(other, y) - d2.transpose() * y).norm(),
            1e-12);
}

TEST(SparseMatrix, FindReturnsPatternPosition) {
  const SparseMatrix a(3, 3, {2, 0, 1}, {1, 0, 2}, Vector::LinSpaced(3, 1, 3));
  EXPECT_EQ(a.find(2, 1), 0);
  EXPECT_EQ(a.find(0, 0), 1);
  EXPECT_EQ(a.find(1, 2), 2);
  EXPECT_FALSE(a.find(1, 1).has_value());
  EXPECT_FALSE(a.find(5, 0).has_value());
}

TEST(SparseMatrix, RejectsBadPatterns) {
  EXPECT_THROW(SparseMatrix(2, 2, {0, 0}, {1, 1}, Vector::Ones(2)), InputError);
  EXPECT_THROW(SparseMatrix(2, 2, {2}, {0}, Vector::Ones(1)), InputError);
  EXPECT_THROW(SparseMatrix(2, 2, {0}, {-1}, Vector::Ones(1)), InputError);
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1}, {0}, Vector::Ones(2)), InputError);
  EXPECT_THROW(SparseMatrix(2, 2, {0}, {0}, Vector::Ones(2)), InputError);
}

TEST(SparseMatrix, EmptyRowsAndColumns) {
  const SparseMatrix a(3, 4, {1}, {2}, Vector::Constant(1, 5.0));
  const Vector x = Vector::Ones(4);
  EXPECT_EQ(a.multiply(x), (Vector(3) << 0, 5, 0).finished());
  EXPECT_EQ(a.multiply_transpose(Vector::Ones(3)),
            (Vector(4) << 0, 0, 5, 0).finished());
}

class KernelSizes : public ::testing::TestWithParam<int> {};

TEST_P(KernelSizes, SerialAndParallelAgree) {
  std::mt19937_64 rng(GetParam());
  const int n = GetParam();
  const SparseMatrix a = random_sparse(n, n / 2 + 1, 8.0 / n, rng);
  const Vector x = random_vector(a.cols(), rng);
  const Vector y = random_vector(a.rows(), rng);

  Vector out_s, out_p;
  kernels::serial::compressed_multiply(a.by_row(), a.values(), x, out_s);
  kernels::compressed_multiply(a.by_row(), a.values(), x, out_p);
  EXPECT_EQ(out_s, out_p);

  kernels::serial::compressed_multiply(a.by_col(), a.values(), y, out_s);
  kernels::compressed_multiply(a.by_col(), a.values(), y, out_p);
  EXPECT_EQ(out_s, out_p);

  const Vector l = random_vector(a.rows(), rng), r = random_vector(a.cols(), rng);
  const Vector l2 = random_vector(a.rows(), rng),
               r2 = random_vector(a.cols(), rng);
  kernels::serial::pattern_outer_difference(a.row_indices(), a.col_indices(), l,
                                            r, l2, r2, out_s);
  kernels::pattern_outer_difference(a.row_indices(), a.col_indices(), l, r, l2,
                                    r2, out_p);
  EXPECT_EQ(out_s, out_p);
  for (int k = 0; k < a.nnz(); ++k) {
    const int i = a.row_indices()[k];
    const int j = a.col_indices()[k];
    EXPECT_DOUBLE_EQ(out_s[k], l[i] * r[j] - l2[i] * r2[j]);
  }

  const Vector v = random_vector(n, rng);
  kernels::serial::positive_part(v, out_s);
  kernels::positive_part(v, out_p);
  EXPECT_EQ(out_s, out_p);
  EXPECT_EQ(out_s, v.cwiseMax(0.0));
}

// Sizes on both sides of the parallel threshold.
INSTANTIATE_TEST_SUITE_P(Sizes, KernelSizes,
                         ::testing::Values(5, 100, kernels::kParallelThreshold,
                                           3 * kernels::kParallelThreshold));

}  // namespace
}  // namespace conediff
