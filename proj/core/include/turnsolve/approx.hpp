#pragma once

#include <optional>
#include <vector>

#include "turnsolve/lp.hpp"
#include "turnsolve/matching.hpp"
#include "turnsolve/trees.hpp"
#include "turnsolve/validate.hpp"

namespace turnsolve {

struct ApproxResult {
  CycleCover cover;       // single cycle for tours (or empty penalty tour)
  CostBreakdown cost;     // recomputed on the instance, penalties included
  Rat lp_lower_bound = 0;
  Rat guarantee = 0;      // proven factor for the variant
  std::optional<Rat> ratio() const {
    if (lp_lower_bound == 0) return std::nullopt;
    return cost.total / lp_lower_bound;
  }
};

/// Per owner, the strip with the highest fractional value; ties go to the
/// smallest strip id (horizontal before vertical on grids).
std::vector<int> dominant_strips(const FractionalSolution& frac, const AtomicStripGraph& asg);

/// Expands a perfect matching on the chosen strips' endpoints into realized
/// cycles. Cycles that never leave a single pixel (the penalty gadget's
/// escape and skip cycles) are dropped.
CycleCover extract_cycles(const std::vector<int>& chosen, const Matching& matching,
                          const AtomicStripGraph& asg, const TransitionOracle& oracle);

/// The 2-omega approximation: LP relaxation, dominant strips, minimum
/// weight perfect matching, cycle extraction. Penalty instances run through
/// the penalty-to-full reduction first.
ApproxResult approx_cycle_cover(const GridInstance& instance,
                                LpBackend backend = LpBackend::Hybrid);

/// Repeatedly splices cycles that share a pixel; each merge adds at most
/// four simple turns and merges across shared u-turns are free.
CycleCover merge_intersecting_cycles(const CycleCover& cover, const GridInstance& instance);

/// Tour connectors. All expect the cover's intersecting cycles pre-merged
/// (they merge anything that still intersects, defensively).
ApproxResult connect_tour_full_grid(CycleCover cover, const GridInstance& instance,
                                    Rat lp_lower_bound);
ApproxResult connect_tour_mst(CycleCover cover, const GridInstance& instance, Rat lp_lower_bound);
ApproxResult connect_tour_pcst(CycleCover cover, const GridInstance& instance,
                               Rat lp_lower_bound);

/// Cycle cover + the variant's connection scheme (full: greedy merging,
/// subset: doubled MST, penalty: doubled prize-collecting Steiner tree).
ApproxResult approx_tour(const GridInstance& instance, LpBackend backend = LpBackend::Hybrid);

}  // namespace turnsolve
