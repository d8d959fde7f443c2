#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "turnsolve/matching.hpp"

using namespace turnsolve;

namespace {

WeightedGraph random_complete(std::mt19937& rng, int n, int max_weight = 40) {
  WeightedGraph g(n);
  std::uniform_int_distribution<int> w(0, max_weight);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_weight(u, v, Rat(w(rng)));
  return g;
}

}  // namespace

TEST_CASE("single edge") {
  WeightedGraph g(2);
  g.set_weight(0, 1, 3);
  Matching m = min_weight_perfect_matching(g);
  CHECK(m.weight == 3);
  REQUIRE(m.edges.size() == 1);
  CHECK(m.edges[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("K4 with one cheap pairing") {
  WeightedGraph g(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) g.set_weight(u, v, 10);
  g.set_weight(0, 1, 1);
  g.set_weight(2, 3, 1);
  Matching m = min_weight_perfect_matching(g);
  CHECK(m.weight == 2);
  CHECK(m.edges == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK(brute_force_matching(g).weight == 2);
}

TEST_CASE("odd vertex count and missing matchings are reported") {
  WeightedGraph g(3);
  g.set_weight(0, 1, 1);
  CHECK_THROWS_AS(min_weight_perfect_matching(g), Error);
  CHECK_THROWS_AS(brute_force_matching(g), Error);

  WeightedGraph h(4);
  h.set_weight(0, 1, 1);
  h.set_weight(0, 2, 1);
  h.set_weight(0, 3, 1);  // 1,2,3 pairwise unconnected
  CHECK_THROWS_AS(min_weight_perfect_matching(h), Error);
  CHECK_THROWS_AS(brute_force_matching(h), Error);

  WeightedGraph big(16);
  CHECK_THROWS_AS(brute_force_matching(big), Error);
}

TEST_CASE("blossom equals brute force on random complete graphs") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 * size(rng);
    WeightedGraph g = random_complete(rng, n);
    Matching fast = min_weight_perfect_matching(g);
    Matching slow = brute_force_matching(g);
    CHECK(fast.weight == slow.weight);
    CHECK(fast.edges == slow.edges);  // lex tie-break on both sides
  }
}

TEST_CASE("blossom handles sparse graphs with forced structure") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 8;
    WeightedGraph g(n);
    std::uniform_int_distribution<int> w(1, 30);
    std::uniform_int_distribution<int> coin(0, 3);
    // A guaranteed perfect matching plus random extras.
    for (int v = 0; v < n; v += 2) g.set_weight(v, v + 1, Rat(w(rng)));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v) && coin(rng) == 0) g.set_weight(u, v, Rat(w(rng)));
    Matching fast = min_weight_perfect_matching(g);
    Matching slow = brute_force_matching(g);
    CHECK(fast.weight == slow.weight);
    CHECK(fast.edges == slow.edges);
  }
}

TEST_CASE("rational weights: halves and thirds") {
  WeightedGraph g(4);
  g.set_weight(0, 1, Rat(1, 3));
  g.set_weight(2, 3, Rat(1, 2));
  g.set_weight(0, 2, Rat(5, 7));
  g.set_weight(1, 3, Rat(5, 7));
  g.set_weight(0, 3, 2);
  g.set_weight(1, 2, 2);
  Matching m = min_weight_perfect_matching(g);
  CHECK(m.weight == Rat(1, 3) + Rat(1, 2));
}

TEST_CASE("adding a constant raises the optimum by c*n/2") {
  std::mt19937 rng(1312);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 10;
    WeightedGraph g = random_complete(rng, n);
    Matching base = min_weight_perfect_matching(g);
    Rat c(7);
    WeightedGraph shifted(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) shifted.set_weight(u, v, g.weight(u, v) + c);
    Matching moved = min_weight_perfect_matching(shifted);
    CHECK(moved.weight == base.weight + c * (n / 2));
    // The base optimum stays optimal after the shift.
    Rat base_shifted(0);
    for (const auto& [u, v] : base.edges) base_shifted += shifted.weight(u, v);
    CHECK(base_shifted == moved.weight);
  }
}

TEST_CASE("brute force dominates random sampled matchings") {
  std::mt19937 rng(555);
  WeightedGraph g = random_complete(rng, 10);
  Matching best = brute_force_matching(g);
  std::vector<int> perm(10);
  for (int i = 0; i < 10; ++i) perm[i] = i;
  for (int s = 0; s < 50; ++s) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Rat total(0);
    for (int i = 0; i < 10; i += 2) total += g.weight(perm[i], perm[i + 1]);
    CHECK(best.weight <= total);
  }
}

TEST_CASE("deterministic across repeated runs") {
  std::mt19937 rng(31);
  WeightedGraph g = random_complete(rng, 12);
  Matching a = min_weight_perfect_matching(g);
  Matching b = min_weight_perfect_matching(g);
  CHECK(a.edges == b.edges);
  CHECK(a.weight == b.weight);
}

TEST_CASE("larger blossom run stays optimal against sampling") {
  std::mt19937 rng(77);
  int n = 40;  // beyond the lex-refinement limit
  WeightedGraph g = random_complete(rng, n, 100);
  Matching m = min_weight_perfect_matching(g);
  REQUIRE(static_cast<int>(m.edges.size()) == n / 2);
  std::vector<char> seen(n, 0);
  for (const auto& [u, v] : m.edges) {
    CHECK(!seen[u]);
    CHECK(!seen[v]);
    seen[u] = seen[v] = 1;
  }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int s = 0; s < 200; ++s) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Rat total(0);
    for (int i = 0; i < n; i += 2) total += g.weight(perm[i], perm[i + 1]);
    CHECK(m.weight <= total);
  }
}
