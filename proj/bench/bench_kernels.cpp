// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "conediff/cones.hpp"
#include "conediff/kernels.hpp"
#include "conediff/sparse.hpp"

namespace {

using conediff::Vector;

conediff::SparseMatrix random_matrix(int rows, int cols, double density) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss;
  std::vector<int> ri, ci;
  std::vector<double> vals;
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      if (unif(rng) < density) {
        ri.push_back(i);
        ci.push_back(j);
        vals.push_back(gauss(rng));
      }
    }
  }
  return conediff::SparseMatrix(rows, cols, ri, ci,
                                Eigen::Map<Vector>(vals.data(), vals.size()));
}

Vector random_vector(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(size);
  for (auto& x : v) x = gauss(rng);
  return v;
}

template <bool Parallel>
void BM_Spmv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, n, 0.01);
  const Vector x = random_vector(n, 1);
  Vector out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      conediff::kernels::compressed_multiply(a.by_row(), a.values(), x, out);
    } else {
      conediff::kernels::serial::compressed_multiply(a.by_row(), a.values(), x,
                                                     out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_SpmvTranspose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, n, 0.01);
  const Vector y = random_vector(n, 2);
  Vector out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      conediff::kernels::compressed_multiply(a.by_col(), a.values(), y, out);
    } else {
      conediff::kernels::serial::compressed_multiply(a.by_col(), a.values(), y,
                                                     out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_PatternExtraction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, n, 0.01);
  const Vector l = random_vector(n, 3), r = random_vector(n, 4);
  const Vector l2 = random_vector(n, 5), r2 = random_vector(n, 6);
  Vector out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      conediff::kernels::pattern_outer_difference(
          a.row_indices(), a.col_indices(), l, r, l2, r2, out);
    } else {
      conediff::kernels::serial::pattern_outer_difference(
          a.row_indices(), a.col_indices(), l, r, l2, r2, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_ConeProjection(benchmark::State& state) {
  // Mixed cone: many small second-order cones and a few PSD blocks.
  const int blocks = static_cast<int>(state.range(0));
  const conediff::ConeSpec spec(10, 100, std::vector<int>(blocks, 8),
                                std::vector<int>(4, 12));
  const Vector v = random_vector(spec.dimension(), 8);
  const auto exec =
      Parallel ? conediff::Execution::Parallel : conediff::Execution::Serial;
  for (auto _ : state) {
    Vector p = conediff::project_dual_cone(v, spec, exec);
    benchmark::DoNotOptimize(p.data());
  }
}

}  // namespace

BENCHMARK(BM_Spmv<false>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_Spmv<true>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_SpmvTranspose<false>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_SpmvTranspose<true>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_PatternExtraction<false>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_PatternExtraction<true>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_ConeProjection<false>)->Arg(100)->Arg(1000);
BENCHMARK(BM_ConeProjection<true>)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
