#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "turnsolve/simplex.hpp"

using namespace turnsolve;

TEST_CASE("two variable equality") {
  LinearProgram lp;
  int x = lp.add_variable("x", 2, 0, std::nullopt);
  int y = lp.add_variable("y", 3, 0, std::nullopt);
  lp.add_row("sum", {{x, 1}, {y, 1}}, '=', 5);
  for (LpBackend backend : {LpBackend::Hybrid, LpBackend::ExactRational}) {
    LpSolution sol = solve_lp(lp, backend);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 10);
    CHECK(sol.values[x] == 5);
    CHECK(sol.values[y] == 0);
    CHECK(lp_residual(lp, sol.values) == 0);
  }
}

TEST_CASE("upper bounds bind") {
  LinearProgram lp;
  int x = lp.add_variable("x", 1, 0, Rat(2));
  int y = lp.add_variable("y", 5, 0, Rat(10));
  lp.add_row("sum", {{x, 1}, {y, 1}}, '=', 6);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[x] == 2);
  CHECK(sol.values[y] == 4);
  CHECK(sol.objective == 22);
}

TEST_CASE("inequalities get slacks") {
  LinearProgram lp;
  int x = lp.add_variable("x", -1, 0, std::nullopt);  // maximize x
  lp.add_row("cap", {{x, 1}}, '<', 7);
  lp.add_row("floor", {{x, 1}}, '>', 2);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[x] == 7);
  CHECK(sol.objective == -7);
}

TEST_CASE("infeasible program detected") {
  LinearProgram lp;
  int x = lp.add_variable("x", 1, 0, Rat(1));
  lp.add_row("impossible", {{x, 1}}, '=', 5);
  CHECK(solve_lp(lp, LpBackend::Hybrid).status == LpStatus::Infeasible);
  CHECK(solve_lp(lp, LpBackend::ExactRational).status == LpStatus::Infeasible);
}

TEST_CASE("exact fractions survive") {
  LinearProgram lp;
  int x = lp.add_variable("x", 3, 0, std::nullopt);
  int y = lp.add_variable("y", 1, 0, std::nullopt);
  lp.add_row("r1", {{x, 3}, {y, 1}}, '=', 1);
  lp.add_row("r2", {{x, -1}, {y, 1}}, '>', 0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // 3x + y = 1, y >= x, minimize 3x + y = 1 always; vertex x=y: x=1/4.
  CHECK(sol.objective == 1);
  CHECK(lp_residual(lp, sol.values) == 0);
}

TEST_CASE("degenerate ties terminate and agree across backends") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 6, m = 4;
    LinearProgram lp;
    for (int j = 0; j < n; ++j)
      lp.add_variable("v" + std::to_string(j), Rat(coef(rng)), 0, Rat(2));
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, Rat>> terms;
      for (int j = 0; j < n; ++j) {
        int c = coef(rng);
        if (c) terms.push_back({j, Rat(c)});
      }
      if (terms.empty()) terms.push_back({r % n, Rat(1)});
      lp.add_row("r" + std::to_string(r), std::move(terms), r % 2 ? '<' : '>', Rat(coef(rng)));
    }
    LpSolution fast = solve_lp(lp, LpBackend::Hybrid);
    LpSolution exact = solve_lp(lp, LpBackend::ExactRational);
    REQUIRE(fast.status == exact.status);
    if (fast.status == LpStatus::Optimal) {
      CHECK(fast.objective == exact.objective);
      CHECK(lp_residual(lp, fast.values) == 0);
      CHECK(lp_residual(lp, exact.values) == 0);
    }
  }
}

TEST_CASE("lp text export") {
  LinearProgram lp;
  int x = lp.add_variable("x", Rat(1, 2), 0, Rat(1));
  lp.add_row("row0", {{x, 1}}, '=', Rat(1, 4));
  std::string text = lp_to_text(lp);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("0.5 x") != std::string::npos);
  CHECK(text.find("row0: 1 x = 0.25") != std::string::npos);
  CHECK(text.find("0 <= x <= 1") != std::string::npos);
}
