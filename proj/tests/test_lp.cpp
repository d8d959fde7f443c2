#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "turnsolve/lp.hpp"

using namespace turnsolve;
using testutil::block;

namespace {

CycleCoverLp domino_lp(Rat kappa, Rat tau, AtomicStripGraph* out = nullptr) {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, kappa, tau);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  if (out) *out = g;
  return build_cc_lp(g);
}

}  // namespace

TEST_CASE("domino LP has the documented shape") {
  CycleCoverLp cc = domino_lp(0, 1);
  CHECK(cc.y_count == 4);
  CHECK(cc.x_count == 36);
  CHECK(cc.lp.vars.size() == 40);
  CHECK(cc.lp.rows.size() == 10);  // 2 cover rows + 8 endpoint rows

  // Every y appears in exactly one cover row and two endpoint rows.
  for (int y = 0; y < cc.y_count; ++y) {
    int cover = 0, endpoint = 0;
    for (std::size_t r = 0; r < cc.lp.rows.size(); ++r)
      for (const auto& [j, a] : cc.lp.rows[r].terms)
        if (j == y) (r < 2 ? cover : endpoint) += 1;
    CHECK(cover == 1);
    CHECK(endpoint == 2);
  }
}

TEST_CASE("loop variables carry coefficient two") {
  AtomicStripGraph g;
  CycleCoverLp cc = domino_lp(0, 1, &g);
  int v = g.vertex_id(0, 0, 0);
  int loop_var = cc.x_index(g, v, v);
  bool found = false;
  for (const auto& row : cc.lp.rows)
    for (const auto& [j, a] : row.terms)
      if (j == loop_var) {
        CHECK(a == 2);
        found = true;
      }
  CHECK(found);
}

TEST_CASE("domino LP objective reaches the known optimum of 4") {
  CycleCoverLp cc = domino_lp(0, 1);
  FractionalSolution frac = solve_cc_lp(cc);
  CHECK(frac.objective == 4);
}

TEST_CASE("LP against exhaustive strip-cover optimum on small blocks") {
  for (auto dims : {std::pair<int, int>{2, 1}, {2, 2}, {3, 1}}) {
    for (int kappa = 0; kappa <= 1; ++kappa) {
      GridInstance inst = full_instance(block(dims.first, dims.second), kappa, 1);
      TransitionOracle oracle(inst);
      AtomicStripGraph g = strips_from_grid(inst, oracle);
      FractionalSolution frac = solve_cc_lp(build_cc_lp(g));
      Rat integral = testutil::asg_full_optimum_all(g);
      CHECK(frac.objective <= integral);
      CHECK(frac.objective >= 0);
    }
  }
}

TEST_CASE("y values form a convex choice per owner") {
  AtomicStripGraph g;
  CycleCoverLp cc = domino_lp(1, 1, &g);
  FractionalSolution frac = solve_cc_lp(cc);
  for (int o = 0; o < g.owner_count(); ++o) {
    Rat sum(0), best(0);
    for (int s = 0; s < g.strips_of(o); ++s) {
      const Rat& y = frac.y[g.global_strip(o, s)];
      CHECK(y >= 0);
      CHECK(y <= 1);
      sum += y;
      if (y > best) best = y;
    }
    CHECK(sum == 1);
    CHECK(best >= Rat(1, 2));  // >= 1/omega
  }
}

TEST_CASE("scaling all edge costs scales the objective") {
  GridInstance inst = full_instance(block(2, 2), 0, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  FractionalSolution base = solve_cc_lp(build_cc_lp(g));

  AtomicStripGraph scaled = g;
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) scaled.set_cost(a, b, g.cost(a, b) * 3);
  FractionalSolution tripled = solve_cc_lp(build_cc_lp(scaled));
  CHECK(tripled.objective == base.objective * 3);
}

TEST_CASE("residuals of the cc LP solution are exactly zero") {
  CycleCoverLp cc = domino_lp(1, 1);
  LpSolution sol = solve_lp(cc.lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(lp_residual(cc.lp, sol.values) == 0);
}

TEST_CASE("hybrid and exact backends agree on grid LPs") {
  GridInstance inst = full_instance(block(3, 2), 1, 2);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  CycleCoverLp cc = build_cc_lp(g);
  FractionalSolution fast = solve_cc_lp(cc, LpBackend::Hybrid);
  FractionalSolution exact = solve_cc_lp(cc, LpBackend::ExactRational);
  CHECK(fast.objective == exact.objective);
}

TEST_CASE("LP text export includes structure") {
  CycleCoverLp cc = domino_lp(Rat(1, 2), 1);
  std::string text = lp_to_text(cc.lp);
  CHECK(text.find("cover_o0") != std::string::npos);
  CHECK(text.find("match_") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
}
