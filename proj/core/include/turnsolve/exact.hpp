#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "turnsolve/grid.hpp"
#include "turnsolve/simplex.hpp"

namespace turnsolve {

struct SolverLimits {
  int max_pixels = 60;  // soft cap, SizeLimitExceeded beyond it
  double time_limit_seconds = std::numeric_limits<double>::infinity();
};

/// A valid inequality sum(coef * var) >= rhs over the transition model's
/// variables (traversals, then coverage indicators for penalty runs).
struct TransitionCut {
  std::vector<std::pair<int, Rat>> terms;
  Rat rhs = 1;
  char family = 's';  // 's'imple or 'a'dvanced
};

struct ExactStats {
  long nodes = 0;
  int simple_cuts = 0;
  int advanced_cuts = 0;
  std::vector<std::string> log;           // one line per node
  std::vector<TransitionCut> cut_pool;    // all cuts emitted during the solve
};

struct ExactSolution {
  CycleCover cover;
  CostBreakdown cost;
  Rat optimum = 0;  // proven optimal objective value
};

/// Transition-variable model of an instance: one integer variable per
/// (pixel, unordered pair of used sides) counting traversals of the pixel
/// entering from the one neighbor and leaving to the other. Edge-balance
/// equalities make integral solutions decomposable into closed walks.
class TransitionModel {
 public:
  explicit TransitionModel(const GridInstance& instance, int traversal_cap = 4);

  struct Traversal {
    int pixel;   // pixel index
    int side_a;  // heading index toward the first neighbor
    int side_b;  // side_a <= side_b; equal for u-turns
    int turns;   // 0 straight, 1 simple turn, 2 u-turn
  };

  const GridInstance& instance() const { return *instance_; }
  int traversal_count() const { return static_cast<int>(traversals_.size()); }
  const Traversal& traversal(int var) const { return traversals_[var]; }
  int var_of(int pixel, int side_a, int side_b) const;
  const std::vector<int>& vars_of(int pixel) const { return by_pixel_[pixel]; }
  bool has_coverage_vars() const { return coverage_vars_; }
  int u_index(int pixel) const { return traversal_count() + pixel; }
  int cap() const { return cap_; }

  /// Coverage + edge-balance rows, objective, bounds. Cuts and branching
  /// constraints are appended by the solver.
  const LinearProgram& base_lp() const { return lp_; }
  /// Constant added to the LP objective (sum of penalties for penalty
  /// instances, where indicators enter with negative cost).
  const Rat& objective_offset() const { return offset_; }

 private:
  const GridInstance* instance_;
  int cap_;
  bool coverage_vars_ = false;
  std::vector<Traversal> traversals_;
  std::vector<std::vector<int>> by_pixel_;
  LinearProgram lp_;
  Rat offset_ = 0;
};

/// Closed walks of an integral transition solution, welded as far as free
/// re-pairings across shared grid edges allow. super_component[w] groups
/// walks that still cannot be joined without extra cost.
struct DecodedWalks {
  std::vector<std::vector<Move>> walks;
  std::vector<int> super_component;
  int component_count = 0;
};

DecodedWalks decode_transition_solution(const TransitionModel& model,
                                        const std::vector<long>& t_values);

/// Simple subtour family: for every support component P' that nothing
/// enters, require a traversal of some pixel of P' entering from outside.
/// Throws Error(NoViolation) when no component yields a violated cut.
std::vector<TransitionCut> separate_simple_cut(const TransitionModel& model,
                                               const std::vector<long>& t_values);

/// Advanced family: for a walk C owning a pixel p_f exclusively while a
/// covered pixel p_f' lies outside C, force p_f to be passed differently,
/// or a simple turn on a straight pixel of C, or an unused traversal
/// elsewhere on C. Throws Error(NoWitness) when no (p_f, p_f') exists.
std::vector<TransitionCut> separate_advanced_cut(const TransitionModel& model,
                                                 const std::vector<long>& t_values);

/// Exact semi-quadratic cycle cover: branch-and-bound on the strip LP,
/// branching on fractional strip selections first, then edges.
ExactSolution solve_exact_cycle_cover(const GridInstance& instance, const SolverLimits& limits = {},
                                      ExactStats* stats = nullptr,
                                      LpBackend backend = LpBackend::Hybrid);

/// Exact tour: branch-and-cut over the transition model with the simple
/// and advanced subtour families.
ExactSolution solve_exact_tour(const GridInstance& instance, const SolverLimits& limits = {},
                               ExactStats* stats = nullptr, LpBackend backend = LpBackend::Hybrid);

/// Exhaustive oracles over the (pixel, heading, covered-mask) state space;
/// capped at 12 required pixels.
ExactSolution brute_force_cycle_cover(const GridInstance& instance);
ExactSolution brute_force_tour(const GridInstance& instance);

}  // namespace turnsolve
