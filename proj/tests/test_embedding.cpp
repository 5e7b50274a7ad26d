#include <random>

#include <gtest/gtest.h>

#include "conediff/embedding.hpp"
#include "conediff/errors.hpp"
#include "conediff/generate.hpp"
#include "conediff/linop.hpp"
#include "conediff/solver.hpp"
#include "oracles.hpp"

namespace conediff {
namespace {

using testing::random_vector;
using testing::unit_lp;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Solution unit_lp_solution() {
  return accept_solution(unit_lp(), vec({1}), vec({1}), vec({0}), 1e-12);
}

// Small instances of every kind, for the dense comparisons.
std::vector<ConeProgramData> small_instances() {
  return {generate_lp(4, 7, 1), generate_lp(6, 6, 2), generate_socp(5, 11, 3),
          generate_sdp(2, 3, 4)};
}

TEST(ConeProgramData, ValidatesDimensions) {
  SparseMatrix a(2, 1, {0, 1}, {0, 0}, Vector::Ones(2));
  EXPECT_THROW(ConeProgramData(a, Vector::Ones(3), Vector::Ones(1),
                               ConeSpec(0, 2)),
               InputError);
  EXPECT_THROW(ConeProgramData(a, Vector::Ones(2), Vector::Ones(2),
                               ConeSpec(0, 2)),
               InputError);
  EXPECT_THROW(ConeProgramData(a, Vector::Ones(2), Vector::Ones(1),
                               ConeSpec(0, 3)),
               InputError);
  const ConeProgramData ok(a, Vector::Ones(2), Vector::Ones(1), ConeSpec(1, 1));
  EXPECT_EQ(ok.N(), 4);
}

TEST(ApplyQ, UnitLpExamples) {
  const ConeProgramData d = unit_lp();
  EXPECT_EQ(apply_Q(d, Vector::Zero(3)), Vector::Zero(3));
  EXPECT_EQ(apply_Q(d, vec({1, 1, 1})), Vector::Zero(3));
  EXPECT_EQ(apply_Q_adjoint(d, vec({1, 1, 1})), Vector::Zero(3));
  Matrix expected(3, 3);
  expected << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  EXPECT_EQ(testing::dense_Q(d), expected);
}

TEST(ApplyQ, MatchesDenseAndIsSkew) {
  std::mt19937_64 rng(1);
  for (const ConeProgramData& d : small_instances()) {
    const Matrix q = testing::dense_Q(d);
    const Matrix qm = materialize(LinearMap(
        d.N(), [&](const Vector& p) { return apply_Q(d, p); },
        [&](const Vector& p) { return apply_Q_adjoint(d, p); }));
    EXPECT_LE((qm - q).norm(), 1e-12 * q.norm());
    EXPECT_LE(qm.diagonal().norm(), 0.0);
    for (int k = 0; k < 10; ++k) {
      const Vector p = random_vector(d.N(), rng);
      const Vector r = random_vector(d.N(), rng);
      EXPECT_LE(std::abs(apply_Q(d, p).dot(p)), 1e-12 * p.squaredNorm());
      EXPECT_NEAR(apply_Q_adjoint(d, p).dot(r), p.dot(apply_Q(d, r)),
                  1e-12 * p.norm() * r.norm());
      EXPECT_LE((apply_Q_adjoint(d, p) + apply_Q(d, p)).norm(), 0.0);
    }
  }
  EXPECT_THROW(apply_Q(unit_lp(), Vector::Zero(2)), InputError);
}

TEST(ResidualMap, UnitLpSolutionIsZero) {
  EXPECT_LE(residual_map(unit_lp(), vec({1, 1, 1})).norm(), 0.0);
}

TEST(ResidualMap, MatchesDenseOracle) {
  std::mt19937_64 rng(2);
  for (const ConeProgramData& d : small_instances()) {
    for (int k = 0; k < 10; ++k) {
      Vector z = random_vector(d.N(), rng);
      z[d.N() - 1] = std::abs(z[d.N() - 1]) + 0.1;
      const Vector oracle = testing::residual_map_oracle(d, z);
      EXPECT_LE((residual_map(d, z) - oracle).norm(),
                1e-10 * (1.0 + oracle.norm()));
    }
  }
}

TEST(ResidualMap, PositivelyHomogeneousOfDegreeZero) {
  std::mt19937_64 rng(3);
  const ConeProgramData d = generate_socp(5, 11, 3);
  for (int k = 0; k < 10; ++k) {
    Vector z = random_vector(d.N(), rng);
    z[d.N() - 1] = std::abs(z[d.N() - 1]) + 0.1;
    const Vector r = residual_map(d, z);
    EXPECT_LE((residual_map(d, 7.0 * z) - r).norm(), 1e-10 * (1.0 + r.norm()));
  }
}

TEST(ResidualMap, ZeroWIsDomainError) {
  EXPECT_THROW(residual_map(unit_lp(), vec({1, 1, 0})), DomainError);
}

TEST(ResidualMap, TwoTermJacobianMatchesFiniteDifferences) {
  // At points that are not solutions both terms of the derivative matter.
  std::mt19937_64 rng(4);
  int checked = 0;
  for (const ConeProgramData& d : small_instances()) {
    for (int k = 0; k < 5; ++k) {
      Vector z = random_vector(d.N(), rng);
      z[d.N() - 1] = std::abs(z[d.N() - 1]) + 0.5;
      const Vector zh = z / z[d.N() - 1];
      if (!dproject_embedding(zh, d.n(), d.cones()).differentiable()) continue;
      ++checked;
      const Matrix jac = testing::residual_map_jacobian_oracle(d, z);
      const Vector e = random_vector(d.N(), rng);
      const Vector fd = testing::central_difference(
          [&](const Vector& p) { return residual_map(d, p); }, z, e, 1e-6);
      EXPECT_LE(testing::relative_error(jac * e, fd), 1e-5);
      // The one-term map is not the derivative away from solutions.
      EXPECT_GT(residual_map(d, z).norm(), 1e-3);
    }
  }
  EXPECT_GE(checked, 15);
}

TEST(ApplyM, UnitLpIsQ) {
  const ConeProgramData d = unit_lp();
  const Solution sol = unit_lp_solution();
  const ResidualJacobian jac(d, sol);
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i) m.col(i) = jac.apply(Vector::Unit(3, i));
  EXPECT_LE((m - testing::dense_Q(d)).norm(), 1e-15);
  Matrix mt(3, 3);
  for (int i = 0; i < 3; ++i) mt.col(i) = jac.apply_adjoint(Vector::Unit(3, i));
  EXPECT_LE((mt - m.transpose()).norm(), 1e-15);
  EXPECT_EQ(apply_M(d, sol, Vector::Zero(3)), Vector::Zero(3));
  EXPECT_EQ(apply_M_adjoint(d, sol, Vector::Zero(3)), Vector::Zero(3));
}

TEST(ApplyM, PairingAndDenseAgreementAtSolutions) {
  std::mt19937_64 rng(5);
  for (const ConeProgramData& d : small_instances()) {
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    const Solution sol = solve(d, cfg);
    ASSERT_EQ(sol.status, SolveStatus::Solved);
    const ResidualJacobian jac(d, sol);

    // Dense oracle: ((Q − I) DΠ(z) + I)/w with DΠ materialized.
    const int dim = d.N();
    const EmbeddingProjectionJacobian dpi =
        dproject_embedding(sol.z.vector(), d.n(), d.cones());
    Matrix dpi_dense(dim, dim);
    for (int i = 0; i < dim; ++i) dpi_dense.col(i) = dpi.apply(Vector::Unit(dim, i));
    const Matrix eye = Matrix::Identity(dim, dim);
    const Matrix oracle =
        ((testing::dense_Q(d) - eye) * dpi_dense + eye) / sol.z.w();
    const Matrix m = materialize(LinearMap(
        dim, [&](const Vector& v) { return jac.apply(v); },
        [&](const Vector& v) { return jac.apply_adjoint(v); }));
    EXPECT_LE((m - oracle).norm(), 1e-10 * oracle.norm());

    for (int k = 0; k < 10; ++k) {
      const Vector a = random_vector(dim, rng);
      const Vector b = random_vector(dim, rng);
      EXPECT_NEAR(jac.apply(a).dot(b), a.dot(jac.apply_adjoint(b)),
                  1e-10 * a.norm() * b.norm());
    }
    // z spans the kernel of M at a solution.
    EXPECT_LE(jac.apply(sol.z.vector()).norm(), 1e-8 * sol.z.vector().norm());
  }
}

TEST(ApplyM, RequiresCertifiedSolution) {
  Solution sol = unit_lp_solution();
  sol.status = SolveStatus::MaxIters;
  EXPECT_THROW(ResidualJacobian(unit_lp(), sol), StateError);
}

TEST(ConstructSolution, UnitLp) {
  const SolutionTriple t =
      construct_solution(EmbeddingPoint(vec({1, 1, 1}), 1, 1), ConeSpec(0, 1));
  EXPECT_EQ(t.x, vec({1}));
  EXPECT_EQ(t.y, vec({1}));
  EXPECT_EQ(t.s, vec({0}));
}

TEST(ConstructSolution, DualInteriorGivesZeroSlack) {
  const SolutionTriple t = construct_solution(
      EmbeddingPoint(vec({0.3, 2, 1, 0.5, 1}), 1, 3), ConeSpec(0, 0, {3}));
  EXPECT_EQ(t.s, Vector::Zero(3));
  EXPECT_EQ(t.y, vec({2, 1, 0.5}));
}

TEST(ConstructSolution, RequiresPositiveW) {
  EXPECT_THROW(
      construct_solution(EmbeddingPoint(vec({1, 1, 0}), 1, 1), ConeSpec(0, 1)),
      DomainError);
  EXPECT_THROW(
      construct_solution(EmbeddingPoint(vec({1, 1, -1}), 1, 1), ConeSpec(0, 1)),
      DomainError);
}

TEST(EmbedSolution, UnitLpAndRoundTrip) {
  const EmbeddingPoint z =
      embed_solution(unit_lp(), vec({1}), vec({1}), vec({0}), 1e-12);
  EXPECT_EQ(z.vector(), vec({1, 1, 1}));

  for (const ConeProgramData& d : small_instances()) {
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    const Solution sol = solve(d, cfg);
    ASSERT_EQ(sol.status, SolveStatus::Solved);
    const EmbeddingPoint e = embed_solution(d, sol.x, sol.y, sol.s, 1e-8);
    EXPECT_LE(residual_map(d, e.vector()).norm(), 1e-8);
    const SolutionTriple t = construct_solution(e, d.cones());
    EXPECT_LE((t.x - sol.x).norm(), 1e-10);
    EXPECT_LE((t.y - sol.y).norm(), 1e-8);
    EXPECT_LE((t.s - sol.s).norm(), 1e-8);
  }
}

TEST(EmbedSolution, FeasiblePointWithZeroDual) {
  // y = 0, s ∈ K: v = −s and Π_{K*}(−s) = 0 = y. Feasibility plus zero
  // objective gap needs c = 0.
  SparseMatrix a(2, 1, {0, 1}, {0, 0}, vec({1, -1}));
  const ConeProgramData d(a, vec({2, 1}), vec({0}), ConeSpec(0, 2));
  const EmbeddingPoint z = embed_solution(d, vec({1}), vec({0, 0}), vec({1, 2}), 1e-12);
  EXPECT_EQ(z.v(), vec({-1, -2}));
  EXPECT_EQ(project_dual_cone(z.v(), d.cones()), Vector::Zero(2));
}

TEST(EmbedSolution, RejectsKktViolations) {
  try {
    embed_solution(unit_lp(), vec({1.1}), vec({1}), vec({0}), 1e-8);
    FAIL() << "expected a KKT violation";
  } catch (const KktViolation& e) {
    EXPECT_EQ(e.residual(), "primal");
    EXPECT_NEAR(e.value(), 0.1, 1e-12);
  }
  EXPECT_THROW(embed_solution(unit_lp(), vec({1}), vec({1.5}), vec({0}), 1e-8),
               KktViolation);
  EXPECT_THROW(embed_solution(unit_lp(), vec({1}), vec({-1}), vec({0}), 1e-8),
               KktViolation);
}

TEST(Dphi, UnitLpExampleAndZero) {
  const Solution sol = unit_lp_solution();
  const SolutionTriple t = apply_dphi(sol, ConeSpec(0, 1), vec({1, 0, 0}));
  EXPECT_EQ(t.x, vec({1}));
  EXPECT_EQ(t.y, vec({0}));
  EXPECT_EQ(t.s, vec({0}));
  const SolutionTriple zero = apply_dphi(sol, ConeSpec(0, 1), Vector::Zero(3));
  EXPECT_EQ(zero.x, vec({0}));
  EXPECT_EQ(zero.y, vec({0}));
  EXPECT_EQ(zero.s, vec({0}));
}

TEST(Dphi, PairingAndFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (const ConeProgramData& d : small_instances()) {
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    const Solution sol = solve(d, cfg);
    ASSERT_EQ(sol.status, SolveStatus::Solved);
    const int n = d.n();
    const int m = d.m();
    for (int k = 0; k < 10; ++k) {
      const Vector dz = random_vector(d.N(), rng);
      const Vector dx = random_vector(n, rng);
      const Vector dy = random_vector(m, rng);
      const Vector ds = random_vector(m, rng);
      const SolutionTriple f = apply_dphi(sol, d.cones(), dz);
      const Vector a = apply_dphi_adjoint(sol, d.cones(), dx, dy, ds);
      const double lhs = f.x.dot(dx) + f.y.dot(dy) + f.s.dot(ds);
      EXPECT_NEAR(lhs, dz.dot(a), 1e-10 * dz.norm() * (dx.norm() + dy.norm() + ds.norm()));
    }
    // φ is differentiable at a strictly complementary solution.
    const Vector e = random_vector(d.N(), rng);
    auto phi = [&](const Vector& z) {
      const SolutionTriple t = construct_solution(EmbeddingPoint(z, n, m), d.cones());
      Vector out(n + 2 * m);
      out << t.x, t.y, t.s;
      return out;
    };
    const SolutionTriple f = apply_dphi(sol, d.cones(), e);
    Vector analytic(n + 2 * m);
    analytic << f.x, f.y, f.s;
    const Vector fd = testing::central_difference(phi, sol.z.vector(), e, 1e-6);
    EXPECT_LE(testing::relative_error(analytic, fd), 1e-5);
  }
}

}  // namespace
}  // namespace conediff
