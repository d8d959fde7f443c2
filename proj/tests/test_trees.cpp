#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "turnsolve/trees.hpp"

using namespace turnsolve;

namespace {

WeightedGraph random_graph(std::mt19937& rng, int n, double density = 0.7, int max_w = 20) {
  WeightedGraph g(n);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<int> w(1, max_w);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < density) g.set_weight(u, v, Rat(w(rng)));
  return g;
}

Rat tree_weight(const WeightedGraph& g, const std::vector<std::pair<int, int>>& edges) {
  Rat total(0);
  for (const auto& [u, v] : edges) total += g.weight(u, v);
  return total;
}

// Exhaustive MST oracle: all (n-1)-subsets of edges.
std::optional<Rat> mst_oracle(const WeightedGraph& g) {
  auto edges = g.edges();
  int n = g.size();
  int m = static_cast<int>(edges.size());
  if (n <= 1) return Rat(0);
  std::optional<Rat> best;
  std::vector<int> pick(n - 1);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == n - 1) {
      std::vector<int> parent(n);
      for (int i = 0; i < n; ++i) parent[i] = i;
      std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
      };
      Rat total(0);
      int merged = 0;
      for (int i = 0; i < n - 1; ++i) {
        auto [u, v, w] = edges[pick[i]];
        if (find(u) != find(v)) {
          parent[find(u)] = find(v);
          ++merged;
        }
        total += w;
      }
      if (merged == n - 1 && (!best || total < *best)) best = total;
      return;
    }
    for (int e = start; e < m; ++e) {
      pick[depth] = e;
      self(self, e + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("triangle MST keeps the two light edges") {
  WeightedGraph g(3);
  g.set_weight(0, 1, 1);
  g.set_weight(1, 2, 2);
  g.set_weight(0, 2, 3);
  auto tree = minimum_spanning_tree(g);
  CHECK(tree_weight(g, tree) == 3);
  CHECK(tree.size() == 2);
}

TEST_CASE("single vertex has an empty tree") {
  WeightedGraph g(1);
  CHECK(minimum_spanning_tree(g).empty());
}

TEST_CASE("disconnected graphs are rejected") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 1);
  g.set_weight(2, 3, 1);
  CHECK_THROWS_AS(minimum_spanning_tree(g), Error);
}

TEST_CASE("MST equals the exhaustive minimum on random graphs") {
  std::mt19937 rng(2718);
  int done = 0;
  while (done < 12) {
    std::uniform_int_distribution<int> size(2, 6);
    WeightedGraph g = random_graph(rng, size(rng));
    auto oracle = mst_oracle(g);
    std::vector<std::pair<int, int>> tree;
    try {
      tree = minimum_spanning_tree(g);
    } catch (const Error&) {
      CHECK(!oracle.has_value());
      continue;
    }
    REQUIRE(oracle.has_value());
    CHECK(tree_weight(g, tree) == *oracle);
    ++done;
  }
}

TEST_CASE("pcst: distant prizes are abandoned") {
  WeightedGraph g(2);
  g.set_weight(0, 1, 10);
  PcstResult res = pcst_gw(g, {Rat(1), Rat(1)});
  CHECK(res.tree_edges.empty());
  CHECK(res.spanned.size() == 1);
  CHECK(res.objective == 1);
}

TEST_CASE("pcst: cheap edges get connected") {
  WeightedGraph g(2);
  g.set_weight(0, 1, 1);
  PcstResult res = pcst_gw(g, {Rat(5), Rat(5)});
  CHECK(res.tree_edges.size() == 1);
  CHECK(res.objective == 1);
}

TEST_CASE("pcst: zero prizes give an empty tree") {
  WeightedGraph g(3);
  g.set_weight(0, 1, 2);
  g.set_weight(1, 2, 2);
  PcstResult res = pcst_gw(g, {Rat(0), Rat(0), Rat(0)});
  CHECK(res.tree_edges.empty());
  CHECK(res.spanned.size() == 1);
  CHECK(res.objective == 0);
}

TEST_CASE("gw stays within factor two of brute force") {
  std::mt19937 rng(16180);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_int_distribution<int> prize(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedGraph g = random_graph(rng, size(rng), 0.8);
    std::vector<Rat> prizes;
    for (int v = 0; v < g.size(); ++v) prizes.push_back(Rat(prize(rng)));
    PcstResult fast = pcst_gw(g, prizes);
    PcstResult slow = brute_force_pcst(g, prizes);
    CHECK(fast.objective >= slow.objective);
    CHECK(fast.objective <= 2 * slow.objective);
    // The reported pieces add up.
    CHECK(fast.tree_cost + fast.unspanned_prize == fast.objective);
  }
}

TEST_CASE("pcst result is a tree containing its spanned vertices") {
  std::mt19937 rng(404);
  WeightedGraph g = random_graph(rng, 7, 0.9);
  std::vector<Rat> prizes(7, Rat(6));
  PcstResult res = pcst_gw(g, prizes);
  CHECK(res.tree_edges.size() + 1 == res.spanned.size());
  for (const auto& [u, v] : res.tree_edges) {
    CHECK(std::binary_search(res.spanned.begin(), res.spanned.end(), u));
    CHECK(std::binary_search(res.spanned.begin(), res.spanned.end(), v));
  }
}
