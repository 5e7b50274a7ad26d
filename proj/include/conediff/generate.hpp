#pragma once

#include <cstdint>
#include <string_view>

#include "conediff/embedding.hpp"

namespace conediff {

/// Random LP over {0}^min(⌊m/4⌋, n) × R₊^rest with a planted strictly
/// complementary primal-dual solution pinning down exactly n rows, so the
/// instance is feasible, bounded and has a unique solution. A is redrawn until
/// the pinned rows are well conditioned (for n ≤ 1000). Requires m ≥ n ≥ 1.
ConeProgramData generate_lp(int n, int m, std::uint64_t seed);

/// Random SOCP over R₊^⌈m/3⌉ × SOC blocks of dimension 3–5, with a planted
/// strictly complementary solution that pins down exactly n rows, with the
/// same conditioning guard as generate_lp. Requires m ≥ n.
ConeProgramData generate_socp(int n, int m, std::uint64_t seed);

/// minimize tr(CX) s.t. tr(AᵢX) = bᵢ (i < p), X ⪰ 0, as a cone program with
/// x = vec(X): zero-cone rows vec(Aᵢ)ᵀ and PSD rows −I. Feasible and bounded
/// by construction: bᵢ = tr(AᵢX₀) with X₀ ≻ 0, and C = Σ yᵢAᵢ + S₀ with S₀ ≻ 0.
ConeProgramData generate_sdp(int p, int side, std::uint64_t seed);

struct ProblemDimensions {
  std::int64_t m;
  std::int64_t n;
  std::int64_t N;
  std::int64_t nnz_A;
  /// Entries of the Aᵢ (the data of the trace constraints).
  std::int64_t constraint_coefficients;
};

ProblemDimensions sdp_dimensions(int p, int side);

/// Describes how symmetric matrices are stored; embedded in generated files.
inline constexpr std::string_view kPsdFormatNote =
    "symmetric matrices are stored as their lower triangle, column by column, "
    "with off-diagonal entries multiplied by sqrt(2)";

}  // namespace conediff
