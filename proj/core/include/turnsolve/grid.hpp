#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turnsolve/error.hpp"
#include "turnsolve/rational.hpp"

namespace turnsolve {

/// A vertex of a grid graph, drawn as a unit square (polyomino cell).
struct Pixel {
  std::int32_t x = 0;
  std::int32_t y = 0;

  auto operator<=>(const Pixel&) const = default;
};

std::string to_string(Pixel p);

enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

constexpr int kHeadingCount = 4;

Heading opposite(Heading h);
Heading rotate_cw(Heading h);
Heading rotate_ccw(Heading h);
/// Number of simple 90-degree turns between two headings: 0, 1 or 2.
int turn_steps(Heading a, Heading b);
/// Neighbor pixel one unit in direction h.
Pixel step(Pixel p, Heading h);
char heading_char(Heading h);
std::optional<Heading> heading_from_char(char c);

enum class CoverageVariant { Full, Subset, Penalty };

/// Grid instance: a 4-connected pixel set plus the coverage requirement and
/// the two cost weights (kappa per unit length, tau per simple turn).
class GridInstance {
 public:
  GridInstance() = default;

  const std::vector<Pixel>& pixels() const { return pixels_; }
  CoverageVariant variant() const { return variant_; }
  const std::vector<Pixel>& subset() const { return subset_; }
  const std::map<Pixel, Rat>& penalties() const { return penalties_; }
  const Rat& kappa() const { return kappa_; }
  const Rat& tau() const { return tau_; }

  int size() const { return static_cast<int>(pixels_.size()); }
  std::optional<int> index_of(Pixel p) const;
  bool contains(Pixel p) const { return index_of(p).has_value(); }
  Pixel pixel(int index) const { return pixels_[index]; }
  /// Neighbor pixel index in direction h, or -1.
  int neighbor(int pixel_index, Heading h) const {
    return neighbors_[pixel_index][static_cast<int>(h)];
  }
  int degree(int pixel_index) const;
  bool in_subset(Pixel p) const;
  Rat penalty(Pixel p) const;
  /// Pixels that must be covered (all pixels for Full, the subset for
  /// Subset, none for Penalty).
  std::vector<Pixel> required_pixels() const;

  friend GridInstance build_grid_instance(std::vector<Pixel> pixels, CoverageVariant variant,
                                          std::vector<Pixel> subset,
                                          std::map<Pixel, Rat> penalties, Rat kappa, Rat tau);

 private:
  std::vector<Pixel> pixels_;
  CoverageVariant variant_ = CoverageVariant::Full;
  std::vector<Pixel> subset_;
  std::map<Pixel, Rat> penalties_;
  Rat kappa_ = 0;
  Rat tau_ = 1;
  std::map<Pixel, int> index_;
  std::vector<std::array<int, 4>> neighbors_;
};

/// Validates and builds an instance. Throws Error with EmptyInstance,
/// DuplicatePixel, Disconnected (message lists components),
/// SubsetNotContained or NegativePenalty.
GridInstance build_grid_instance(std::vector<Pixel> pixels, CoverageVariant variant,
                                 std::vector<Pixel> subset = {},
                                 std::map<Pixel, Rat> penalties = {}, Rat kappa = 0, Rat tau = 1);

GridInstance full_instance(std::vector<Pixel> pixels, Rat kappa = 0, Rat tau = 1);

/// Robot pose: pixel plus heading.
struct Configuration {
  Pixel pixel;
  Heading heading = Heading::East;

  auto operator<=>(const Configuration&) const = default;
};

std::string to_string(Configuration c);

/// A closed configuration walk. Consecutive steps are either unit moves in
/// the current heading or 90-degree rotations in place; the sequence closes
/// cyclically and touches at least two distinct pixels.
class Cycle {
 public:
  /// Validates the step sequence; throws Error on malformed input.
  static Cycle from_steps(std::vector<Configuration> steps);
  /// No validation; for building deliberately broken covers in tests and
  /// for the validator's own diagnostics.
  static Cycle unchecked(std::vector<Configuration> steps);

  const std::vector<Configuration>& steps() const { return steps_; }
  /// Number of pixel transitions.
  int length() const;
  /// Number of simple 90-degree turns (a u-turn contributes 2).
  int simple_turns() const;
  std::vector<Pixel> covered_pixels() const;
  int rotations_at(Pixel p) const;
  /// Structural check; returns an explanation for the first defect found.
  std::optional<std::string> structural_defect() const;

  Cycle reversed() const;
  Cycle rotated(int offset) const;

 private:
  std::vector<Configuration> steps_;
};

Rat cycle_cost(const Cycle& cycle, const Rat& kappa, const Rat& tau);

struct CostBreakdown {
  int length = 0;
  int turns = 0;
  Rat distance_cost = 0;
  Rat turn_cost = 0;
  Rat penalty_paid = 0;
  Rat total = 0;
};

struct CycleCover {
  std::vector<Cycle> cycles;

  bool covers(Pixel p) const;
  std::vector<Pixel> covered_pixels() const;
};

/// One unit move of a closed walk. A cycle is equivalently a cyclic move
/// sequence; rotations between consecutive moves are implied (clockwise
/// decomposition for u-turns).
struct Move {
  Pixel from;
  Heading heading;

  Pixel target() const { return step(from, heading); }
  auto operator<=>(const Move&) const = default;
};

std::vector<Move> cycle_moves(const Cycle& cycle);
Cycle cycle_from_moves(const std::vector<Move>& moves);
/// kappa * moves + tau * implied rotations.
Rat moves_cost(const std::vector<Move>& moves, const Rat& kappa, const Rat& tau);

/// Cost of a cover on an instance, including penalties of uncovered penalty
/// pixels.
CostBreakdown cover_cost(const GridInstance& instance, const CycleCover& cover);

}  // namespace turnsolve
