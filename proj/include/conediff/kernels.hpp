#pragma once

// Data-parallel inner loops. The default namespace holds the OpenMP versions;
// `serial` holds straight-line references with identical signatures that the
// tests compare against and the benchmarks time.

#include "conediff/sparse.hpp"

namespace conediff::kernels {

// Below this many output entries the OpenMP kernels run on one thread.
inline constexpr int kParallelThreshold = 2048;

/// out[i] = sum over compressed row i of vals[pos[k]] * x[idx[k]].
void compressed_multiply(const CompressedIndex& index, const Vector& vals,
                         const Vector& x, Vector& out);

/// out[k] = left[rows[k]] * right[cols[k]] - left2[rows[k]] * right2[cols[k]]
/// for every pattern entry k; this is the Ω-restricted difference of two
/// outer products used by the adjoint map.
void pattern_outer_difference(const std::vector<int>& rows,
                              const std::vector<int>& cols,
                              const Vector& left, const Vector& right,
                              const Vector& left2, const Vector& right2,
                              Vector& out);

/// out = max(v, 0) componentwise.
void positive_part(const Vector& v, Vector& out);

namespace serial {

void compressed_multiply(const CompressedIndex& index, const Vector& vals,
                         const Vector& x, Vector& out);

void pattern_outer_difference(const std::vector<int>& rows,
                              const std::vector<int>& cols,
                              const Vector& left, const Vector& right,
                              const Vector& left2, const Vector& right2,
                              Vector& out);

void positive_part(const Vector& v, Vector& out);

}  // namespace serial

}  // namespace conediff::kernels
