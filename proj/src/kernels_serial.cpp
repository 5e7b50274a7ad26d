#include <algorithm>

#include "conediff/kernels.hpp"

namespace conediff::kernels::serial {

void compressed_multiply(const CompressedIndex& index, const Vector& vals,
                         const Vector& x, Vector& out) {
  const int outer = static_cast<int>(index.ptr.size()) - 1;
  out.setZero(outer);
  for (int i = 0; i < outer; ++i) {
    for (int k = index.ptr[i]; k < index.ptr[i + 1]; ++k) {
      out[i] += vals[index.pos[k]] * x[index.idx[k]];
    }
  }
}

void pattern_outer_difference(const std::vector<int>& rows,
                              const std::vector<int>& cols,
                              const Vector& left, const Vector& right,
                              const Vector& left2, const Vector& right2,
                              Vector& out) {
  out.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out[k] = left[rows[k]] * right[cols[k]] - left2[rows[k]] * right2[cols[k]];
  }
}

void positive_part(const Vector& v, Vector& out) {
  out = v.cwiseMax(0.0);
}

}  // namespace conediff::kernels::serial
