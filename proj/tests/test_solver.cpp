#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "physbc/error.hpp"
#include "physbc/solver.hpp"

using namespace physbc;

TEST(Solver, SymmetricPinch) {
  EpigraphLp lp(1);
  lp.add_row(std::vector<double>{1.0}, 0.0);
  lp.add_row(std::vector<double>{-1.0}, 0.0);
  lp.set_bounds(0, -100.0, 100.0);
  const auto r = solve(lp);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.eta, 0.0, 1e-12);
  EXPECT_NEAR(r.decision[0], 0.0, 1e-12);
  const auto d = solve_minmax_direct(lp);
  EXPECT_NEAR(d.eta, 0.0, 1e-6);
}

TEST(Solver, SymmetricPinchWithoutBox) {
  EpigraphLp lp(1);
  lp.add_row(std::vector<double>{1.0}, 0.0);
  lp.add_row(std::vector<double>{-1.0}, 0.0);
  const auto r = solve(lp);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.eta, 0.0, 1e-12);
}

TEST(Solver, SingleRowHitsBoxCorner) {
  EpigraphLp lp(1);
  lp.add_row(std::vector<double>{1.0}, 0.0);
  lp.set_bounds(0, -100.0, 100.0);
  const auto r = solve(lp);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.eta, -100.0, 1e-9);
  EXPECT_NEAR(r.decision[0], -100.0, 1e-9);
  EXPECT_NEAR(solve_minmax_direct(lp).eta, -100.0, 1e-4);
}

TEST(Solver, UnboundedWithoutBox) {
  EpigraphLp lp(1);
  lp.add_row(std::vector<double>{1.0}, 0.0);
  EXPECT_EQ(solve(lp).status, SolveStatus::kUnbounded);
  EXPECT_EQ(solve_minmax_direct(lp).status, SolveStatus::kUnbounded);
}

TEST(Solver, RejectsEmptyProgram) {
  EpigraphLp lp(2);
  EXPECT_THROW(solve(lp), Error);
}

TEST(Solver, MatchesVertexEnumeration4x50) {
  Rng rng(2024);
  const auto lp = oracle::random_lp(rng, 4, 50);
  const auto r = solve(lp);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.eta, oracle::vertex_enumeration(lp), 1e-6);
}

TEST(Solver, CutsAreHonoured) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto lp = oracle::random_lp(rng, 2, 20, true);
    const auto r = solve(lp);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_LE(lp.max_side_violation(r.decision), 1e-9);
    EXPECT_NEAR(r.eta, oracle::vertex_enumeration(lp), 1e-6);
  }
}

TEST(Solver, OptimalHasTightRow) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto lp = oracle::random_lp(rng, 1 + t % 4, 30);
    const auto r = solve(lp);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    ASSERT_FALSE(r.active_rows.empty());
    EXPECT_NEAR(lp.row_value(r.active_rows.front(), r.decision), r.eta, 1e-9);
    EXPECT_NEAR(lp.max_row_value(r.decision), r.eta, 1e-12);
  }
}

TEST(Solver, DirectIterationLimit) {
  Rng rng(1);
  const auto lp = oracle::random_lp(rng, 3, 20);
  SolverConfig cfg;
  cfg.minmax_max_iterations = 3;
  EXPECT_EQ(solve_minmax_direct(lp, cfg).status, SolveStatus::kIterationLimit);
}

TEST(Solver, DegenerateRowsTerminate) {
  // Many duplicated rows through the same vertex.
  EpigraphLp lp(2);
  for (int k = 0; k < 40; ++k) {
    lp.add_row(std::vector<double>{1.0, 0.0}, 0.0);
    lp.add_row(std::vector<double>{0.0, 1.0}, 0.0);
    lp.add_row(std::vector<double>{-1.0, -1.0}, 0.0);
  }
  lp.set_bounds(0, -5, 5);
  lp.set_bounds(1, -5, 5);
  const auto r = solve(lp);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.eta, 0.0, 1e-12);
}
