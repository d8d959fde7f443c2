#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "turnsolve/error.hpp"
#include "turnsolve/rational.hpp"

namespace turnsolve {

/// Undirected weighted graph on n vertices, no loops. Absent pairs carry
/// no edge; weights must be nonnegative.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n = 0) : n_(n), weight_(idx(n, n)), present_(idx(n, n), 0) {}

  int size() const { return n_; }
  void set_weight(int u, int v, Rat w);
  bool has_edge(int u, int v) const { return u != v && present_[idx(u, v)]; }
  const Rat& weight(int u, int v) const { return weight_[idx(u, v)]; }

  std::vector<std::tuple<int, int, Rat>> edges() const;

 private:
  static std::size_t idx(int u, int v) {
    if (u > v) std::swap(u, v);
    return static_cast<std::size_t>(v) * (v + 1) / 2 + u;
  }
  int n_ = 0;
  std::vector<Rat> weight_;
  std::vector<char> present_;
};

struct Matching {
  std::vector<std::pair<int, int>> edges;  // each (u < v), sorted ascending
  Rat weight = 0;

  bool operator==(const Matching& other) const { return edges == other.edges; }
};

struct MatchingOptions {
  /// Up to this many vertices the optimal edge set is refined to the
  /// lexicographically smallest one among all optima (re-solves on shrunk
  /// graphs). Beyond it the blossom output is returned as is, which is
  /// still deterministic.
  int lex_refine_limit = 32;
};

/// Exact minimum-weight perfect matching (blossom algorithm, O(n^3)).
/// Throws OddVertexCount / NoPerfectMatching.
Matching min_weight_perfect_matching(const WeightedGraph& g, MatchingOptions options = {});

/// Exhaustive oracle for n <= 14; lexicographically smallest optimal
/// edge set. Throws TooLarge / OddVertexCount / NoPerfectMatching.
Matching brute_force_matching(const WeightedGraph& g);

}  // namespace turnsolve
