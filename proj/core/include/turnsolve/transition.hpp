#pragma once

#include <memory>
#include <vector>

#include "turnsolve/grid.hpp"

namespace turnsolve {

/// Shortest paths in the configuration state graph of a grid instance:
/// every pixel is replaced by four heading states, a unit move along the
/// current heading costs kappa and a 90-degree rotation costs tau. Searches
/// are label-setting with deterministic tie-breaking by state id, so path
/// reconstruction is reproducible. Per-source results are cached.
class TransitionOracle {
 public:
  explicit TransitionOracle(const GridInstance& instance);

  struct Result {
    Rat cost;
    std::vector<Configuration> path;  // from source to target inclusive
  };

  /// Minimum-cost configuration walk; throws Error(Unreachable) if the
  /// target cannot be reached (impossible on connected instances).
  Result route(Configuration from, Configuration to) const;
  Rat cost(Configuration from, Configuration to) const;

  /// Minimum over all 4x4 heading pairs (used by the tour connectors,
  /// which ignore end orientations).
  Rat orientation_free_cost(Pixel from, Pixel to) const;

  /// Cheapest configuration walk containing at least one pixel move; the
  /// plain shortest path degenerates to zero for from == to, but loop-like
  /// strip connections describe genuine detours through a second pixel.
  Result moved_route(Configuration from, Configuration to) const;
  Rat moved_cost(Configuration from, Configuration to) const;

  int state_of(Configuration c) const;
  Configuration config_of(int state) const;
  const GridInstance& instance() const { return *instance_; }

 private:
  struct SourceTable {
    bool computed = false;
    std::vector<Rat> dist;
    std::vector<int> parent;
  };

  const SourceTable& table_for(int source) const;

  const GridInstance* instance_;
  mutable std::vector<SourceTable> tables_;
};

}  // namespace turnsolve
