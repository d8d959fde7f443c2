#pragma once

#include <string>
#include <vector>

#include "turnsolve/grid.hpp"

namespace turnsolve {

/// A maximal connected collinear run of pixels.
struct FullStrip {
  bool horizontal = true;
  std::vector<Pixel> pixels;
};

std::vector<FullStrip> full_strips(const GridInstance& instance);

struct ValidationReport {
  std::vector<Pixel> coverage_violations;
  std::vector<std::string> malformed_cycles;  // "cycle <i>: <reason>"
  std::vector<Pixel> off_instance_pixels;
  /// Strips with an odd number of simple turns (u-turns count twice).
  std::vector<std::string> parity_violations;
  CostBreakdown recomputed_cost;

  bool ok() const {
    return coverage_violations.empty() && malformed_cycles.empty() &&
           off_instance_pixels.empty() && parity_violations.empty();
  }
  std::string summary() const;
};

/// Checks coverage of the instance variant, structural validity of each
/// cycle, recomputes the cost, and verifies the even-turn parity on every
/// maximal horizontal/vertical strip.
ValidationReport validate_cycle_cover(const GridInstance& instance, const CycleCover& cover);

}  // namespace turnsolve
