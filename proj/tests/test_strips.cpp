#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "turnsolve/strips.hpp"

using namespace turnsolve;
using testutil::block;

namespace {

AtomicStripGraph random_closed_graph(std::mt19937& rng, int owners, int max_strips = 2) {
  std::uniform_int_distribution<int> nstrips(1, max_strips);
  std::vector<int> per_owner;
  for (int o = 0; o < owners; ++o) per_owner.push_back(nstrips(rng));
  AtomicStripGraph g = AtomicStripGraph::make(per_owner);
  std::uniform_int_distribution<int> w(0, 20);
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) g.set_cost(a, b, Rat(w(rng)));
  return metric_close(std::move(g));
}

}  // namespace

TEST_CASE("domino strip costs match the transition oracle") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);

  CHECK(g.owner_count() == 2);
  CHECK(g.omega() == 2);
  CHECK(g.vertex_count() == 8);

  int pE = g.vertex_id(0, 0, 1);  // horizontal strip, East side
  int pW = g.vertex_id(0, 0, 0);
  int pN = g.vertex_id(0, 1, 1);
  int qE = g.vertex_id(1, 0, 1);
  int qW = g.vertex_id(1, 0, 0);
  int qS = g.vertex_id(1, 1, 0);

  CHECK(g.cost(pE, qW) == 0);   // straight pass
  CHECK(g.cost(pW, qE) == 4);   // two u-turns
  CHECK(g.cost(pN, qS) == 2);   // rotate, cross, rotate
}

TEST_CASE("strip costs are symmetric") {
  GridInstance inst = full_instance(block(3, 2), 1, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) CHECK(g.cost(a, b) == g.cost(b, a));
}

TEST_CASE("grid strip graphs are already metrically closed") {
  for (auto dims : {std::pair<int, int>{2, 1}, {2, 2}, {3, 2}}) {
    GridInstance inst = full_instance(block(dims.first, dims.second), 1, 1);
    TransitionOracle oracle(inst);
    AtomicStripGraph g = strips_from_grid(inst, oracle);
    CHECK(check_pseudo_triangle(g).empty());
    AtomicStripGraph closed = metric_close(g);
    for (int a = 0; a < g.vertex_count(); ++a)
      for (int b = a; b < g.vertex_count(); ++b) CHECK(closed.cost(a, b) == g.cost(a, b));
  }
}

TEST_CASE("one relaxation step: 10 beats 3+4") {
  AtomicStripGraph g = AtomicStripGraph::make({1, 1});
  int v1 = g.vertex_id(0, 0, 0);
  int v2 = g.vertex_id(0, 0, 1);
  int w1 = g.vertex_id(1, 0, 0);
  int w2 = g.vertex_id(1, 0, 1);
  // Defaults are zero; raise everything to neutral values first.
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) g.set_cost(a, b, Rat(50));
  g.set_cost(v1, v2, 10);
  g.set_cost(v1, w1, 3);
  g.set_cost(w2, v2, 4);
  AtomicStripGraph closed = metric_close(g);
  CHECK(closed.cost(v1, v2) == 7);
  // The violation is visible before closing.
  auto violations = check_pseudo_triangle(g);
  bool found = false;
  for (const auto& v : violations)
    if (v.v1 == std::min(v1, v2) && v.v2 == std::max(v1, v2)) found = true;
  CHECK(found);
  CHECK(check_pseudo_triangle(closed).empty());
}

TEST_CASE("metric_close is idempotent and never increases entries") {
  std::mt19937 rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> owners(2, 5);
    int n = owners(rng);
    std::uniform_int_distribution<int> nstrips(1, 2);
    std::vector<int> per_owner;
    for (int o = 0; o < n; ++o) per_owner.push_back(nstrips(rng));
    AtomicStripGraph g = AtomicStripGraph::make(per_owner);
    std::uniform_int_distribution<int> w(0, 20);
    for (int a = 0; a < g.vertex_count(); ++a)
      for (int b = a; b < g.vertex_count(); ++b) g.set_cost(a, b, Rat(w(rng)));

    AtomicStripGraph closed = metric_close(g);
    CHECK(check_pseudo_triangle(closed).empty());
    for (int a = 0; a < g.vertex_count(); ++a)
      for (int b = a; b < g.vertex_count(); ++b) CHECK(closed.cost(a, b) <= g.cost(a, b));
    AtomicStripGraph twice = metric_close(closed);
    for (int a = 0; a < g.vertex_count(); ++a)
      for (int b = a; b < g.vertex_count(); ++b) CHECK(twice.cost(a, b) == closed.cost(a, b));
  }
}

TEST_CASE("single-owner graphs have no loop witness") {
  AtomicStripGraph g = AtomicStripGraph::make({2});
  CHECK_THROWS_AS(metric_close(g), Error);
}

TEST_CASE("penalty_to_full: zero penalties cost nothing extra") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 8; ++trial) {
    AtomicStripGraph g = random_closed_graph(rng, 2);
    std::vector<Rat> zero(g.owner_count(), Rat(0));
    AtomicStripGraph ext = penalty_to_full(g, zero);
    CHECK(check_pseudo_triangle(ext).empty());
    CHECK(testutil::asg_full_optimum_all(ext) == testutil::asg_penalty_optimum(g, zero));
  }
}

TEST_CASE("penalty_to_full: one expensive point pays iff skipping is cheaper") {
  std::mt19937 rng(99);
  AtomicStripGraph g = random_closed_graph(rng, 2);
  for (int c : {0, 1, 3, 50}) {
    std::vector<Rat> pen{Rat(c), Rat(0)};
    AtomicStripGraph ext = penalty_to_full(g, pen);
    CHECK(check_pseudo_triangle(ext).empty());
    CHECK(testutil::asg_full_optimum_all(ext) == testutil::asg_penalty_optimum(g, pen));
  }
}

TEST_CASE("penalty_to_full preserves omega and matches brute force") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 14; ++trial) {
    AtomicStripGraph g = random_closed_graph(rng, 2);
    std::uniform_int_distribution<int> p(0, 6);
    std::vector<Rat> pen;
    for (int o = 0; o < g.owner_count(); ++o) pen.push_back(Rat(p(rng)));

    AtomicStripGraph ext = penalty_to_full(g, pen);
    CHECK(ext.omega() == g.omega());
    CHECK(ext.owner_count() == 3 * g.owner_count());
    CHECK(check_pseudo_triangle(ext).empty());
    CHECK(testutil::asg_full_optimum_all(ext) == testutil::asg_penalty_optimum(g, pen));
  }
}

TEST_CASE("penalty_to_full closure holds on larger random graphs") {
  // Value equality is brute-force checked on two owners above; for three
  // and four owners the extended matching space is too big to enumerate,
  // but the pseudo-triangle closure and shape invariants stay cheap.
  std::mt19937 rng(2025);
  for (int owners : {3, 4}) {
    AtomicStripGraph g = random_closed_graph(rng, owners);
    std::uniform_int_distribution<int> p(0, 6);
    std::vector<Rat> pen;
    for (int o = 0; o < g.owner_count(); ++o) pen.push_back(Rat(p(rng)));
    AtomicStripGraph ext = penalty_to_full(g, pen);
    CHECK(ext.omega() == g.omega());
    CHECK(check_pseudo_triangle(ext).empty());
  }
}

TEST_CASE("penalty_to_full on the domino with mixed penalties") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  SUBCASE("small penalties are paid") {
    AtomicStripGraph ext = penalty_to_full(g, {Rat(1), Rat(1)});
    // Skipping both (pay 2) beats the 4-turn domino cycle.
    CHECK(testutil::asg_full_optimum_all(ext) == 2);
  }
  SUBCASE("large penalties force coverage") {
    AtomicStripGraph ext = penalty_to_full(g, {Rat(100), Rat(100)});
    CHECK(testutil::asg_full_optimum_all(ext) == 4);
  }
  SUBCASE("asymmetric penalties: covering still needs two pixels") {
    AtomicStripGraph ext = penalty_to_full(g, {Rat(1), Rat(100)});
    // A cycle must include both pixels (cost 4), or skip p0 (1 + cycle
    // impossible alone for p1... the cycle through p1 alone does not
    // exist), so optimum = min(4, 1 + pay-or-cover p1 alone).
    CHECK(testutil::asg_full_optimum_all(ext) ==
          testutil::asg_penalty_optimum(g, {Rat(1), Rat(100)}));
  }
}

TEST_CASE("realize_connection reproduces costs on grid graphs") {
  GridInstance inst = full_instance(block(3, 2), 1, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = 0; b < g.vertex_count(); ++b) {
      auto path = realize_connection(g, oracle, a, b);
      REQUIRE(!path.empty());
      CHECK(path.front() == g.config(a));
      CHECK(path.back() == g.config(g.sibling(b)));
      Rat total(0);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i].pixel == path[i + 1].pixel)
          total += inst.tau();
        else
          total += inst.kappa();
      }
      if (a != b && !g.same_strip(a, b))
        CHECK(total == g.cost(a, b));
      else
        CHECK(total <= g.cost(a, b));  // witness detours may overpay
    }
}
