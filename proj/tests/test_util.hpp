#pragma once

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "turnsolve/grid.hpp"
#include "turnsolve/matching.hpp"
#include "turnsolve/strips.hpp"

namespace turnsolve::testutil {

/// Random connected polyomino grown by a lattice walk, bounded to a box.
inline std::vector<Pixel> random_polyomino(std::mt19937& rng, int target, int max_dim = 8) {
  std::set<Pixel> cells{{0, 0}};
  Pixel cur{0, 0};
  std::uniform_int_distribution<int> dir(0, 3);
  int guard = 40 * target + 100;
  while (static_cast<int>(cells.size()) < target && guard-- > 0) {
    Pixel next = step(cur, static_cast<Heading>(dir(rng)));
    if (next.x < 0 || next.y < 0 || next.x >= max_dim || next.y >= max_dim) continue;
    cells.insert(next);
    cur = next;
  }
  return {cells.begin(), cells.end()};
}

inline std::vector<Pixel> block(int w, int h, int x0 = 0, int y0 = 0) {
  std::vector<Pixel> cells;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) cells.push_back({x0 + x, y0 + y});
  return cells;
}

/// The unique (up to symmetry) tour of a domino: forward, u-turn, back.
inline Cycle domino_cycle(Pixel a, Pixel b) {
  // a and b horizontally adjacent, a left of b.
  return Cycle::from_steps({
      {a, Heading::East},
      {b, Heading::East},
      {b, Heading::South},
      {b, Heading::West},
      {a, Heading::West},
      {a, Heading::North},
  });
}

/// Exhaustive optimum of the full semi-quadratic cycle cover on an
/// atomic-strip graph: every strip selection, every perfect matching on the
/// selected endpoints (intra-strip pairs allowed, loops not).
inline std::optional<Rat> asg_full_optimum(const AtomicStripGraph& g,
                                           const std::vector<int>& owners) {
  if (owners.empty()) return Rat(0);
  std::optional<Rat> best;
  std::vector<int> choice(owners.size(), 0);
  while (true) {
    std::vector<int> endpoints;
    for (std::size_t i = 0; i < owners.size(); ++i) {
      int s = g.global_strip(owners[i], choice[i]);
      endpoints.push_back(g.endpoint(s, 0));
      endpoints.push_back(g.endpoint(s, 1));
    }
    WeightedGraph wg(static_cast<int>(endpoints.size()));
    for (std::size_t i = 0; i < endpoints.size(); ++i)
      for (std::size_t j = i + 1; j < endpoints.size(); ++j)
        wg.set_weight(static_cast<int>(i), static_cast<int>(j),
                      g.cost(endpoints[i], endpoints[j]));
    Rat value = brute_force_matching(wg).weight;
    if (!best || value < *best) best = value;

    // Next strip selection.
    std::size_t k = 0;
    while (k < owners.size()) {
      if (++choice[k] < g.strips_of(owners[k])) break;
      choice[k] = 0;
      ++k;
    }
    if (k == owners.size()) break;
  }
  return best;
}

inline Rat asg_full_optimum_all(const AtomicStripGraph& g) {
  std::vector<int> owners;
  for (int o = 0; o < g.owner_count(); ++o) owners.push_back(o);
  return *asg_full_optimum(g, owners);
}

/// Exhaustive penalty optimum: every covered owner subset.
inline Rat asg_penalty_optimum(const AtomicStripGraph& g, const std::vector<Rat>& penalties) {
  int n = g.owner_count();
  Rat best(-1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> owners;
    Rat paid(0);
    for (int o = 0; o < n; ++o) {
      if (mask & (1u << o))
        owners.push_back(o);
      else
        paid += penalties[o];
    }
    if (owners.size() == 1 && g.strips_of(owners[0]) == 0) continue;
    auto covered = asg_full_optimum(g, owners);
    if (!covered) continue;
    Rat total = *covered + paid;
    if (best < 0 || total < best) best = total;
  }
  return best;
}

}  // namespace turnsolve::testutil
