#include "turnsolve/trees.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace turnsolve {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::vector<std::pair<int, int>> minimum_spanning_tree(const WeightedGraph& g) {
  auto edges = g.edges();
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) < std::get<2>(b);
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  UnionFind uf(g.size());
  std::vector<std::pair<int, int>> tree;
  for (const auto& [u, v, w] : edges)
    if (uf.unite(u, v)) tree.push_back({u, v});
  if (static_cast<int>(tree.size()) != g.size() - 1 && g.size() > 0)
    throw Error(Errc::Disconnected, "graph has no spanning tree");
  return tree;
}

namespace {

// Strong pruning: on the tree given by adjacency, pick the subtree rooted
// at `root` maximizing kept prize minus kept edge cost.
struct PruneResult {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> vertices;
};

PruneResult strong_prune(const WeightedGraph& g, const std::vector<std::vector<int>>& adj,
                         const std::vector<Rat>& prizes, int root) {
  std::vector<Rat> net(g.size(), Rat(0));
  std::vector<std::vector<int>> keep_children(g.size());
  // Iterative post-order.
  std::vector<std::pair<int, int>> stack{{root, -1}};
  std::vector<std::pair<int, int>> order;
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    stack.pop_back();
    order.push_back({v, parent});
    for (int w : adj[v])
      if (w != parent) stack.push_back({w, v});
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto [v, parent] = *it;
    net[v] = prizes[v];
    for (int w : adj[v]) {
      if (w == parent) continue;
      Rat gain = net[w] - g.weight(v, w);
      if (gain > 0) {
        net[v] += gain;
        keep_children[v].push_back(w);
      }
    }
  }
  PruneResult out;
  std::vector<int> walk{root};
  while (!walk.empty()) {
    int v = walk.back();
    walk.pop_back();
    out.vertices.push_back(v);
    for (int w : keep_children[v]) {
      out.edges.push_back({std::min(v, w), std::max(v, w)});
      walk.push_back(w);
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

PcstResult evaluate(const WeightedGraph& g, const std::vector<Rat>& prizes,
                    const PruneResult& pruned) {
  PcstResult res;
  res.tree_edges = pruned.edges;
  res.spanned = pruned.vertices;
  for (const auto& [u, v] : pruned.edges) res.tree_cost += g.weight(u, v);
  std::vector<char> in(g.size(), 0);
  for (int v : pruned.vertices) in[v] = 1;
  for (int v = 0; v < g.size(); ++v)
    if (!in[v]) res.unspanned_prize += prizes[v];
  res.objective = res.tree_cost + res.unspanned_prize;
  return res;
}

// One rooted Goemans-Williamson growth phase; returns the forest edges.
std::vector<std::pair<int, int>> gw_growth(const WeightedGraph& g, const std::vector<Rat>& prizes,
                                           int root) {
  const int n = g.size();
  UnionFind uf(n);
  std::vector<Rat> moat(n, Rat(0));     // sum of duals of clusters containing v
  std::vector<Rat> budget(n);           // remaining prize budget per cluster root
  std::vector<char> active(n, 1);
  for (int v = 0; v < n; ++v) budget[v] = prizes[v];
  active[root] = 0;
  std::vector<std::pair<int, int>> forest;

  while (true) {
    bool any_active = false;
    for (int v = 0; v < n; ++v)
      if (active[uf.find(v)] && uf.find(v) == v) any_active = true;
    if (!any_active) break;

    // Next edge event.
    Rat best_eps(-1);
    int best_u = -1, best_v = -1;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) continue;
        int cu = uf.find(u), cv = uf.find(v);
        if (cu == cv) continue;
        int rate = (active[cu] ? 1 : 0) + (active[cv] ? 1 : 0);
        if (rate == 0) continue;
        Rat slack = g.weight(u, v) - moat[u] - moat[v];
        Rat eps = slack / rate;
        if (eps < 0) eps = 0;
        if (best_eps < 0 || eps < best_eps) {
          best_eps = eps;
          best_u = u;
          best_v = v;
        }
      }
    // Next cluster-deactivation event.
    Rat best_budget(-1);
    int best_cluster = -1;
    for (int v = 0; v < n; ++v)
      if (uf.find(v) == v && active[v] && (best_budget < 0 || budget[v] < best_budget)) {
        best_budget = budget[v];
        best_cluster = v;
      }

    bool edge_event = best_eps >= 0 && (best_budget < 0 || best_eps <= best_budget);
    Rat eps = edge_event ? best_eps : best_budget;

    // Advance time by eps on all active clusters.
    for (int v = 0; v < n; ++v)
      if (active[uf.find(v)]) moat[v] += eps;
    for (int v = 0; v < n; ++v)
      if (uf.find(v) == v && active[v]) budget[v] -= eps;

    if (edge_event) {
      int cu = uf.find(best_u), cv = uf.find(best_v);
      forest.push_back({best_u, best_v});
      bool merged_active = active[cu] || active[cv];
      Rat merged_budget = (active[cu] ? budget[cu] : Rat(0)) + (active[cv] ? budget[cv] : Rat(0));
      uf.unite(cu, cv);
      int m = uf.find(cu);
      if (cu == uf.find(root) || cv == uf.find(root) || m == uf.find(root)) merged_active = false;
      active[m] = merged_active ? 1 : 0;
      budget[m] = merged_budget;
    } else {
      active[best_cluster] = 0;
    }
  }
  return forest;
}

}  // namespace

PcstResult pcst_gw(const WeightedGraph& g, const std::vector<Rat>& prizes) {
  if (g.size() == 0) return {};
  if (static_cast<int>(prizes.size()) != g.size())
    throw Error(Errc::ParamOutOfRange, "prize vector size mismatch");
  for (const Rat& p : prizes)
    if (p < 0) throw Error(Errc::ParamOutOfRange, "negative prize");

  std::optional<PcstResult> best;
  for (int root = 0; root < g.size(); ++root) {
    auto forest = gw_growth(g, prizes, root);
    // Root component of the forest.
    UnionFind uf(g.size());
    for (const auto& [u, v] : forest) uf.unite(u, v);
    std::vector<std::vector<int>> adj(g.size());
    for (const auto& [u, v] : forest)
      if (uf.find(u) == uf.find(root)) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    PcstResult res = evaluate(g, prizes, strong_prune(g, adj, prizes, root));
    if (!best || res.objective < best->objective) best = std::move(res);
  }
  return *best;
}

PcstResult brute_force_pcst(const WeightedGraph& g, const std::vector<Rat>& prizes) {
  int n = g.size();
  if (n > 16) throw Error(Errc::TooLarge, "brute force PCST capped at 16 vertices");
  std::optional<PcstResult> best;

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) keep.push_back(v);
    // MST on the induced subgraph, if connected.
    WeightedGraph sub(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = i + 1; j < keep.size(); ++j)
        if (g.has_edge(keep[i], keep[j]))
          sub.set_weight(static_cast<int>(i), static_cast<int>(j), g.weight(keep[i], keep[j]));
    std::vector<std::pair<int, int>> tree;
    try {
      tree = minimum_spanning_tree(sub);
    } catch (const Error&) {
      continue;  // disconnected subset
    }
    PcstResult res;
    res.spanned = keep;
    for (const auto& [i, j] : tree) {
      res.tree_edges.push_back({keep[i], keep[j]});
      res.tree_cost += sub.weight(i, j);
    }
    for (int v = 0; v < n; ++v)
      if (!(mask & (1u << v))) res.unspanned_prize += prizes[v];
    res.objective = res.tree_cost + res.unspanned_prize;
    if (!best || res.objective < best->objective) best = std::move(res);
  }
  if (!best) throw Error(Errc::EmptyInstance, "empty graph");
  return *best;
}

}  // namespace turnsolve
