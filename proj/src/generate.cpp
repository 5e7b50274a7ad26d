#include "conediff/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "conediff/errors.hpp"

namespace conediff {
namespace {

constexpr double kDensity = 0.6;
// A is redrawn until the n×n system of pinned rows has σ_min/σ_max at least
// kPinnedConditioning/n; a nearly singular one makes the solution nearly
// non-unique and the solution map nearly non-differentiable.
constexpr double kPinnedConditioning = 0.25;
constexpr int kMaxDraws = 100;
// Above this n the conditioning check costs more than it is worth.
constexpr int kConditioningCheckLimit = 1000;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }
  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  template <typename It>
  void shuffle(It first, It last) {
    std::shuffle(first, last, rng_);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Sparse Gaussian matrix with every row and column nonempty.
SparseMatrix random_sparse(int m, int n, Sampler& rng) {
  Matrix dense = Matrix::Zero(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      if (rng.coin(kDensity)) dense(i, j) = rng.normal();
    }
  }
  for (int j = 0; j < n; ++j) {
    if (dense.col(j).isZero(0.0)) dense(rng.integer(0, m - 1), j) = rng.normal();
  }
  for (int i = 0; i < m; ++i) {
    if (dense.row(i).isZero(0.0)) dense(i, rng.integer(0, n - 1)) = rng.normal();
  }
  std::vector<int> rows, cols;
  std::vector<double> vals;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      if (dense(i, j) != 0.0) {
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(dense(i, j));
      }
    }
  }
  return SparseMatrix(m, n, std::move(rows), std::move(cols),
                      Eigen::Map<Vector>(vals.data(), vals.size()));
}

ConeProgramData plant(SparseMatrix a, const Vector& x0, const Vector& s0,
                      const Vector& y0, ConeSpec cones) {
  Vector b = a.multiply(x0) + s0;
  Vector c = -a.multiply_transpose(y0);
  return ConeProgramData(std::move(a), std::move(b), std::move(c),
                         std::move(cones));
}

// Linear functionals (rows of the pinned system) as dense m-vectors w, each
// contributing the row wᵀA.
using Functionals = std::vector<Vector>;

double pinned_conditioning(const SparseMatrix& a, const Functionals& pinned) {
  const int n = a.cols();
  Matrix p(static_cast<int>(pinned.size()), n);
  for (std::size_t k = 0; k < pinned.size(); ++k) {
    p.row(static_cast<int>(k)) = a.multiply_transpose(pinned[k]).transpose();
  }
  const Eigen::BDCSVD<Matrix> svd(p);
  const Vector& sv = svd.singularValues();
  return sv[0] > 0.0 ? sv[sv.size() - 1] / sv[0] : 0.0;
}

// Draws A until the pinned system is well conditioned; keeps the best draw if
// none qualifies.
SparseMatrix draw_matrix(int m, int n, const Functionals& pinned,
                         Sampler& rng) {
  SparseMatrix best = random_sparse(m, n, rng);
  if (n > kConditioningCheckLimit) return best;
  double best_ratio = pinned_conditioning(best, pinned);
  for (int k = 1; k < kMaxDraws && best_ratio < kPinnedConditioning / n; ++k) {
    SparseMatrix a = random_sparse(m, n, rng);
    const double ratio = pinned_conditioning(a, pinned);
    if (ratio > best_ratio) {
      best = std::move(a);
      best_ratio = ratio;
    }
  }
  return best;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

}  // namespace

ConeProgramData generate_lp(int n, int m, std::uint64_t seed) {
  require(n >= 1 && m >= 1, "lp generator: sizes must be >= 1");
  require(m >= n, "lp generator: need m >= n for a unique solution");
  Sampler rng(seed);

  // Exactly n rows carry a nonzero dual: the zero-cone rows plus n - zero
  // active inequalities. More would over-determine x, fewer would leave it
  // free.
  const int zero = std::min(m / 4, n);
  const int nonneg = m - zero;

  Vector s0 = Vector::Zero(m);
  Vector y0 = Vector::Zero(m);
  for (int i = 0; i < zero; ++i) y0[i] = rng.normal();

  std::vector<int> order(nonneg);
  std::iota(order.begin(), order.end(), zero);
  rng.shuffle(order.begin(), order.end());
  const int active = n - zero;
  for (int k = 0; k < nonneg; ++k) {
    const int row = order[k];
    if (k < active) {
      y0[row] = rng.uniform(0.5, 1.5);
    } else {
      s0[row] = rng.uniform(0.5, 1.5);
    }
  }
  Functionals pinned;
  for (int i = 0; i < m; ++i) {
    if (i < zero || y0[i] != 0.0) pinned.push_back(Vector::Unit(m, i));
  }
  SparseMatrix a = draw_matrix(m, n, pinned, rng);
  const Vector x0 = rng.normal_vector(n);
  return plant(std::move(a), x0, s0, y0, ConeSpec(zero, nonneg));
}

ConeProgramData generate_socp(int n, int m, std::uint64_t seed) {
  require(n >= 1 && m >= 1, "socp generator: sizes must be >= 1");
  require(m >= n, "socp generator: need m >= n for a unique solution");
  Sampler rng(seed);

  const int nonneg = std::max(1, (m + 2) / 3);
  std::vector<int> soc;
  for (int rest = m - nonneg; rest > 0;) {
    int d = std::min(rest, rng.integer(3, 5));
    if (rest - d > 0 && rest - d < 3) d = rest;
    soc.push_back(d);
    rest -= d;
  }
  ConeSpec cones(0, nonneg, soc);

  // Per-block complementarity pattern. Each choice pins some rows of Ax + s = b
  // (an active inequality 1, an SOC boundary 1, a zero SOC slack all of its
  // rows) and frees as many dual coordinates; exactly n pinned rows give a
  // unique, nondegenerate solution. reach[i][r] says whether items i.. can pin
  // exactly r rows.
  enum class Mode { SlackInterior, Boundary, DualInterior };
  const int items = nonneg + static_cast<int>(soc.size());
  auto options = [&](int item) {
    if (item < nonneg) return std::vector<int>{0, 1};
    const int d = soc[item - nonneg];
    // A one-dimensional SOC has no boundary besides the origin.
    return d == 1 ? std::vector<int>{0, d} : std::vector<int>{0, 1, d};
  };
  std::vector<std::vector<char>> reach(items + 1,
                                       std::vector<char>(n + 1, 0));
  reach[items][0] = 1;
  for (int i = items - 1; i >= 0; --i) {
    for (int r = 0; r <= n; ++r) {
      for (int o : options(i)) {
        if (o <= r && reach[i + 1][r - o]) reach[i][r] = 1;
      }
    }
  }
  require(reach[0][n] != 0, "socp generator: cannot pin down x with this m");

  std::vector<char> nonneg_active(nonneg, 0);
  std::vector<Mode> modes(soc.size(), Mode::SlackInterior);
  for (int i = 0, r = n; i < items; ++i) {
    std::vector<int> opts = options(i);
    rng.shuffle(opts.begin(), opts.end());
    for (int o : opts) {
      if (o > r || !reach[i + 1][r - o]) continue;
      if (i < nonneg) {
        nonneg_active[i] = static_cast<char>(o);
      } else {
        const int d = soc[i - nonneg];
        modes[i - nonneg] = o == 0   ? Mode::SlackInterior
                            : o == d ? Mode::DualInterior
                                     : Mode::Boundary;
      }
      r -= o;
      break;
    }
  }

  Vector s0 = Vector::Zero(m);
  Vector y0 = Vector::Zero(m);
  for (int i = 0; i < nonneg; ++i) {
    (nonneg_active[i] ? y0 : s0)[i] = rng.uniform(0.5, 1.5);
  }
  const auto& blocks = cones.blocks();
  for (std::size_t k = 0; k < soc.size(); ++k) {
    const ConeBlock& blk = blocks[k + 1];
    const int d = blk.dim();
    auto s_blk = s0.segment(blk.offset, d);
    auto y_blk = y0.segment(blk.offset, d);
    auto interior = [&] {
      Vector v(d);
      Vector tail = 0.5 * rng.normal_vector(d - 1);
      v << tail.norm() + rng.uniform(0.5, 1.5), tail;
      return v;
    };
    switch (modes[k]) {
      case Mode::SlackInterior:
        s_blk = interior();
        break;
      case Mode::DualInterior:
        y_blk = interior();
        break;
      case Mode::Boundary: {
        Vector dir = rng.normal_vector(d - 1);
        dir /= dir.norm();
        const double alpha = rng.uniform(0.5, 1.5);
        const double beta = rng.uniform(0.5, 1.5);
        s_blk << alpha, alpha * dir;
        y_blk << beta, -beta * dir;
        break;
      }
    }
  }
  // Pinned rows: active inequalities, every row of a zero SOC slack, and for
  // a boundary block the tangency condition y_blkᵀ(A x)_blk.
  Functionals pinned;
  for (int i = 0; i < nonneg; ++i) {
    if (nonneg_active[i]) pinned.push_back(Vector::Unit(m, i));
  }
  for (std::size_t k = 0; k < soc.size(); ++k) {
    const ConeBlock& blk = blocks[k + 1];
    if (modes[k] == Mode::DualInterior) {
      for (int i = 0; i < blk.dim(); ++i) {
        pinned.push_back(Vector::Unit(m, blk.offset + i));
      }
    } else if (modes[k] == Mode::Boundary) {
      Vector w = Vector::Zero(m);
      w.segment(blk.offset, blk.dim()) =
          y0.segment(blk.offset, blk.dim()).normalized();
      pinned.push_back(std::move(w));
    }
  }
  SparseMatrix a = draw_matrix(m, n, pinned, rng);
  const Vector x0 = rng.normal_vector(n);
  return plant(std::move(a), x0, s0, y0, std::move(cones));
}

ProblemDimensions sdp_dimensions(int p, int side) {
  const std::int64_t n = static_cast<std::int64_t>(side) * (side + 1) / 2;
  const std::int64_t m = p + n;
  return {m, n, m + n + 1, p * n + n, p * n};
}

ConeProgramData generate_sdp(int p, int side, std::uint64_t seed) {
  require(p >= 1 && side >= 1, "sdp generator: sizes must be >= 1");
  Sampler rng(seed);
  const int n = psd_vec_size(side);
  const int m = p + n;

  auto random_symmetric = [&] {
    Matrix g(side, side);
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) g(i, j) = rng.normal();
    }
    return Matrix(0.5 * (g + g.transpose()));
  };
  auto random_definite = [&] {
    Matrix w(side, side);
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) w(i, j) = rng.normal();
    }
    return Matrix(w * w.transpose() / side +
                  0.5 * Matrix::Identity(side, side));
  };

  const std::int64_t nnz = static_cast<std::int64_t>(p) * n + n;
  std::vector<int> rows, cols;
  std::vector<double> vals;
  rows.reserve(nnz);
  cols.reserve(nnz);
  vals.reserve(nnz);

  const Matrix x0 = random_definite();
  const Vector x0_vec = vectorize_symmetric(x0);
  Vector b = Vector::Zero(m);
  Matrix c_mat = random_definite();  // S₀
  for (int i = 0; i < p; ++i) {
    const Vector ai = vectorize_symmetric(random_symmetric());
    b[i] = ai.dot(x0_vec);
    c_mat += rng.normal() * unvectorize_symmetric(ai);
    for (int j = 0; j < n; ++j) {
      rows.push_back(i);
      cols.push_back(j);
      vals.push_back(ai[j]);
    }
  }
  for (int j = 0; j < n; ++j) {
    rows.push_back(p + j);
    cols.push_back(j);
    vals.push_back(-1.0);
  }
  SparseMatrix a(m, n, std::move(rows), std::move(cols),
                 Eigen::Map<Vector>(vals.data(), vals.size()));
  return ConeProgramData(std::move(a), std::move(b),
                         vectorize_symmetric(c_mat), ConeSpec(p, 0, {}, {side}));
}

}  // namespace conediff
