#include "turnsolve/gen.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace turnsolve {

namespace {

std::set<Pixel> walk_polyomino(std::mt19937& rng, int cells, int max_dim) {
  std::set<Pixel> out{{0, 0}};
  Pixel cur{0, 0};
  std::uniform_int_distribution<int> dir(0, 3);
  long guard = 200L * cells + 1000;
  while (static_cast<int>(out.size()) < cells && guard-- > 0) {
    Pixel next = step(cur, static_cast<Heading>(dir(rng)));
    if (next.x < 0 || next.y < 0 || next.x >= max_dim || next.y >= max_dim) continue;
    out.insert(next);
    cur = next;
  }
  return out;
}

std::set<Pixel> office_pixels(std::mt19937& rng, int target) {
  std::set<Pixel> out;
  int rooms = std::max(2, target / 16);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_int_distribution<int> pos(0, std::max(4, target / 2));
  Pixel prev_center{0, 0};
  for (int r = 0; r < rooms; ++r) {
    int w = dim(rng), h = dim(rng);
    int x0 = pos(rng), y0 = pos(rng);
    for (int x = x0; x < x0 + w; ++x)
      for (int y = y0; y < y0 + h; ++y) out.insert({x, y});
    Pixel center{x0 + w / 2, y0 + h / 2};
    if (r > 0) {
      // L-shaped corridor to the previous room.
      int x = prev_center.x;
      while (x != center.x) {
        out.insert({x, prev_center.y});
        x += x < center.x ? 1 : -1;
      }
      int y = prev_center.y;
      while (y != center.y) {
        out.insert({center.x, y});
        y += y < center.y ? 1 : -1;
      }
      out.insert(center);
    }
    prev_center = center;
  }
  return out;
}

}  // namespace

GridInstance gen_instance(const GenParams& params) {
  if (params.n < 2) throw Error(Errc::ParamOutOfRange, "n must be at least 2");
  if (params.scale < 1 || params.scale > 8)
    throw Error(Errc::ParamOutOfRange, "scale must be in 1..8");
  if (params.penalty_max < 0) throw Error(Errc::ParamOutOfRange, "penalty_max must be >= 0");
  std::mt19937 rng(params.seed);

  std::set<Pixel> cells;
  if (params.kind == "corridor") {
    for (int x = 0; x < params.n; ++x) cells.insert({x, 0});
  } else if (params.kind == "office") {
    cells = office_pixels(rng, params.n);
  } else if (params.kind == "random-polyomino") {
    int coarse = std::max(2, params.n / (params.scale * params.scale));
    int max_dim = 4;
    while (max_dim * max_dim < 4 * coarse) ++max_dim;
    std::set<Pixel> walk = walk_polyomino(rng, coarse, max_dim);
    for (const Pixel& p : walk)
      for (int dx = 0; dx < params.scale; ++dx)
        for (int dy = 0; dy < params.scale; ++dy)
          cells.insert({p.x * params.scale + dx, p.y * params.scale + dy});
  } else {
    throw Error(Errc::ParamOutOfRange, "unknown generator kind '" + params.kind + "'");
  }

  std::vector<Pixel> pixels(cells.begin(), cells.end());
  std::vector<Pixel> subset;
  std::map<Pixel, Rat> penalties;
  if (params.variant == CoverageVariant::Subset) {
    int every = std::max(1, params.subset_every);
    for (std::size_t i = 0; i < pixels.size(); i += every) subset.push_back(pixels[i]);
  }
  if (params.variant == CoverageVariant::Penalty) {
    long steps = 2 * params.penalty_max.get_num().get_si() /
                     std::max(1L, params.penalty_max.get_den().get_si()) +
                 1;
    std::uniform_int_distribution<long> pen(0, std::max(1L, steps));
    for (const Pixel& p : pixels) penalties[p] = Rat(pen(rng), 2);
  }
  return build_grid_instance(std::move(pixels), params.variant, std::move(subset),
                             std::move(penalties), params.kappa, params.tau);
}

}  // namespace turnsolve
