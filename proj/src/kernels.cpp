#include "conediff/kernels.hpp"

#include <algorithm>

namespace conediff::kernels {

void compressed_multiply(const CompressedIndex& index, const Vector& vals,
                         const Vector& x, Vector& out) {
  const int outer = static_cast<int>(index.ptr.size()) - 1;
  out.resize(outer);
#pragma omp parallel for schedule(static) if (outer > kParallelThreshold)
  for (int i = 0; i < outer; ++i) {
    double acc = 0.0;
    for (int k = index.ptr[i]; k < index.ptr[i + 1]; ++k) {
      acc += vals[index.pos[k]] * x[index.idx[k]];
    }
    out[i] = acc;
  }
}

void pattern_outer_difference(const std::vector<int>& rows,
                              const std::vector<int>& cols,
                              const Vector& left, const Vector& right,
                              const Vector& left2, const Vector& right2,
                              Vector& out) {
  const int nnz = static_cast<int>(rows.size());
  out.resize(nnz);
#pragma omp parallel for schedule(static) if (nnz > kParallelThreshold)
  for (int k = 0; k < nnz; ++k) {
    const int i = rows[k];
    const int j = cols[k];
    out[k] = left[i] * right[j] - left2[i] * right2[j];
  }
}

void positive_part(const Vector& v, Vector& out) {
  const int n = static_cast<int>(v.size());
  out.resize(n);
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (int i = 0; i < n; ++i) out[i] = std::max(v[i], 0.0);
}

}  // namespace conediff::kernels
