#pragma once

#include <string>

#include "turnsolve/grid.hpp"

namespace turnsolve {

struct GenParams {
  std::string kind = "random-polyomino";  // office | random-polyomino | corridor
  int n = 20;                             // target pixel count
  int scale = 1;                          // cell blow-up for random-polyomino
  unsigned seed = 1;
  CoverageVariant variant = CoverageVariant::Full;
  /// Subset variant: roughly every (1/subset_fraction)-th pixel is marked.
  int subset_every = 3;
  /// Penalty variant: penalties drawn from {0, 1/2, 1, ..., penalty_max}.
  Rat penalty_max = 5;
  Rat kappa = 0;
  Rat tau = 1;
};

/// Deterministic instance generator. office lays out axis-aligned rooms
/// joined by corridors, random-polyomino grows a scaled lattice walk,
/// corridor is the 1xn strip. Output always passes build_grid_instance.
GridInstance gen_instance(const GenParams& params);

}  // namespace turnsolve
