#include <random>

#include <gtest/gtest.h>

#include "conediff/embedding.hpp"
#include "conediff/errors.hpp"
#include "conediff/generate.hpp"
#include "conediff/solver.hpp"
#include "oracles.hpp"

namespace conediff {
namespace {

ConeProgramData dense_program(const Matrix& a, const Vector& b, const Vector& c,
                              ConeSpec cones) {
  std::vector<int> ri, ci;
  std::vector<double> vals;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      if (a(i, j) == 0.0) continue;
      ri.push_back(i);
      ci.push_back(j);
      vals.push_back(a(i, j));
    }
  }
  return ConeProgramData(
      SparseMatrix(static_cast<int>(a.rows()), static_cast<int>(a.cols()), ri,
                   ci, Eigen::Map<const Vector>(vals.data(), vals.size())),
      b, c, std::move(cones));
}

void expect_certified(const ConeProgramData& d, const Solution& sol,
                      double tol) {
  ASSERT_EQ(sol.status, SolveStatus::Solved);
  const double scale = kkt_scale(d);
  const KktResiduals r = kkt_residuals(d, sol.x, sol.y, sol.s);
  EXPECT_LE(r.primal, tol * scale);
  EXPECT_LE(r.dual, tol * scale);
  EXPECT_LE(r.gap, tol * scale);
  EXPECT_LE(r.objective_gap, tol * scale);
  EXPECT_LE(distance_to_primal_cone(sol.s, d.cones()), 1e-9);
  EXPECT_LE(distance_to_dual_cone(sol.y, d.cones()), 1e-9);
  EXPECT_LE(residual_map(d, sol.z.vector()).norm(), 10 * tol);
  EXPECT_DOUBLE_EQ(sol.z.w(), 1.0);
}

TEST(Solve, UnitLp) {
  const ConeProgramData d = testing::unit_lp();
  const Solution sol = solve(d);
  expect_certified(d, sol, 1e-8);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-8);
  EXPECT_NEAR(sol.y[0], 1.0, 1e-8);
  EXPECT_NEAR(sol.s[0], 0.0, 1e-8);
}

TEST(Solve, ZeroConeWithIdentityGivesXEqualsB) {
  std::mt19937_64 rng(1);
  const int n = 6;
  const Vector b = testing::random_vector(n, rng);
  const Vector c = testing::random_vector(n, rng);
  const ConeProgramData d =
      dense_program(Matrix::Identity(n, n), b, c, ConeSpec(n, 0));
  const Solution sol = solve(d);
  expect_certified(d, sol, 1e-8);
  EXPECT_LE((sol.x - b).norm(), 1e-7);
  EXPECT_LE((sol.y + c).norm(), 1e-7);
  EXPECT_LE(sol.s.norm(), 1e-7);
}

TEST(Solve, RandomSocpMeetsKktTolerance) {
  const ConeProgramData d = generate_socp(20, 35, 11);
  const Solution sol = solve(d);
  expect_certified(d, sol, 1e-6);
}

TEST(Solve, GeneratedInstancesAreCertified) {
  const std::vector<ConeProgramData> problems = {
      generate_lp(5, 8, 1),    generate_lp(10, 40, 2), generate_lp(30, 60, 3),
      generate_socp(10, 30, 4), generate_socp(20, 20, 5),
      generate_sdp(4, 6, 6),   generate_sdp(3, 8, 7)};
  for (const auto& d : problems) {
    SCOPED_TRACE("n = " + std::to_string(d.n()) + ", m = " +
                 std::to_string(d.m()));
    const SolverConfig cfg;
    const Solution sol = solve(d, cfg);
    expect_certified(d, sol, cfg.tolerance);
    // Complementarity relative to the size of the pair.
    EXPECT_LE(std::abs(sol.s.dot(sol.y)),
              cfg.tolerance * (1.0 + sol.s.norm() * sol.y.norm()));
  }
}

TEST(Solve, DetectsInfeasibility) {
  // x ≤ −1 and x ≥ 1.
  Matrix a(2, 1);
  a << 1.0, -1.0;
  const ConeProgramData d = dense_program(a, Vector::Constant(2, -1.0),
                                          Vector::Ones(1), ConeSpec(0, 2));
  EXPECT_EQ(solve(d).status, SolveStatus::InfeasibleOrUnbounded);
}

TEST(Solve, DetectsUnboundedness) {
  // minimize −x subject to x ≥ 0.
  const ConeProgramData d =
      dense_program(-Matrix::Identity(1, 1), Vector::Zero(1),
                    -Vector::Ones(1), ConeSpec(0, 1));
  EXPECT_EQ(solve(d).status, SolveStatus::InfeasibleOrUnbounded);
}

TEST(Solve, IterationLimitIsReported) {
  SolverConfig cfg;
  cfg.max_iterations = 1;
  const Solution sol = solve(generate_socp(10, 30, 4), cfg);
  EXPECT_EQ(sol.status, SolveStatus::MaxIters);
  EXPECT_EQ(sol.iterations, 1);
}

TEST(Solve, WithoutRefinementStillCertifies) {
  SolverConfig cfg;
  cfg.refine_steps = 0;
  const ConeProgramData d = generate_lp(5, 8, 1);
  expect_certified(d, solve(d, cfg), cfg.tolerance);
}

TEST(Solve, RejectsBadConfiguration) {
  const ConeProgramData d = testing::unit_lp();
  SolverConfig cfg;
  cfg.relaxation = 2.0;
  EXPECT_THROW(solve(d, cfg), InputError);
  cfg = {};
  cfg.tolerance = 0.0;
  EXPECT_THROW(solve(d, cfg), InputError);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(solve(d, cfg), InputError);
}

TEST(AcceptSolution, RejectsPerturbedPrimal) {
  const ConeProgramData d = testing::unit_lp();
  try {
    accept_solution(d, Vector::Constant(1, 1.1), Vector::Ones(1),
                    Vector::Zero(1), 1e-8);
    FAIL() << "expected KktViolation";
  } catch (const KktViolation& e) {
    EXPECT_EQ(e.residual(), "primal");
    EXPECT_NE(std::string(e.what()).find("primal"), std::string::npos);
  }
}

TEST(AcceptSolution, RoundTripsSolverOutput) {
  const ConeProgramData d = generate_socp(8, 16, 9);
  const Solution sol = solve(d);
  ASSERT_EQ(sol.status, SolveStatus::Solved);
  const SolutionTriple t = construct_solution(sol.z, d.cones());
  const Solution again = accept_solution(d, t.x, t.y, t.s, 1e-6);
  EXPECT_EQ(again.status, SolveStatus::Solved);
  EXPECT_LE((again.z.vector() - sol.z.vector()).norm(), 1e-10);
  EXPECT_LE((again.x - sol.x).norm(), 1e-10);
  EXPECT_LE((again.y - sol.y).norm(), 1e-10);
  EXPECT_LE((again.s - sol.s).norm(), 1e-10);
}

TEST(Refine, NeverIncreasesResidualMapNorm) {
  std::mt19937_64 rng(3);
  const std::vector<ConeProgramData> problems = {
      generate_lp(6, 12, 1), generate_socp(6, 15, 2), generate_sdp(2, 4, 3)};
  for (const auto& d : problems) {
    const Solution sol = solve(d);
    ASSERT_EQ(sol.status, SolveStatus::Solved);
    for (double noise : {1e-1, 1e-3, 1e-6}) {
      Vector z = sol.z.vector() + testing::random_vector(d.N(), rng, noise);
      z[d.N() - 1] = 1.0;
      const RefineResult r = refine(d, z, 5);
      ASSERT_FALSE(r.residual_norms.empty());
      EXPECT_NEAR(r.residual_norms.front(), residual_map(d, z).norm(),
                  1e-12 * (1.0 + r.residual_norms.front()));
      for (std::size_t k = 1; k < r.residual_norms.size(); ++k) {
        EXPECT_LE(r.residual_norms[k], r.residual_norms[k - 1]);
      }
      EXPECT_LE(residual_map(d, r.z).norm(), r.residual_norms.front());
    }
  }
}

TEST(Refine, RequiresPositiveW) {
  const ConeProgramData d = testing::unit_lp();
  EXPECT_THROW(refine(d, Vector::Zero(3), 1), DomainError);
  EXPECT_THROW(refine(d, Vector::Ones(2), 1), InputError);
}

}  // namespace
}  // namespace conediff
