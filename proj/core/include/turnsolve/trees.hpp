#pragma once

#include <utility>
#include <vector>

#include "turnsolve/matching.hpp"

namespace turnsolve {

/// Minimum spanning tree (Kruskal, ties by lexicographic edge order).
/// Throws Error(Disconnected) when the present edges do not connect g.
std::vector<std::pair<int, int>> minimum_spanning_tree(const WeightedGraph& g);

struct PcstResult {
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<int> spanned;  // vertices of the tree, ascending
  Rat tree_cost = 0;
  Rat unspanned_prize = 0;   // penalties paid
  Rat objective = 0;         // tree_cost + unspanned_prize
};

/// Prize-collecting Steiner tree, Goemans-Williamson primal-dual moat
/// growth followed by strong pruning; the rooted run is repeated for every
/// root and the best result returned, giving the classic factor-2
/// guarantee against the unrooted optimum.
PcstResult pcst_gw(const WeightedGraph& g, const std::vector<Rat>& prizes);

/// Exhaustive PCST oracle: tries every connected vertex subset (n <= 16).
PcstResult brute_force_pcst(const WeightedGraph& g, const std::vector<Rat>& prizes);

}  // namespace turnsolve
