#pragma once

#include <optional>
#include <string>

#include "turnsolve/geometry.hpp"
#include "turnsolve/grid.hpp"

namespace turnsolve {

/// A parsed instance file: exactly one of the two members is set.
struct ParsedInstance {
  std::optional<GridInstance> grid;
  std::optional<GeometricInstance> geo;
  std::vector<Rat> geo_penalties;  // aligned with geo->points (penalty variant)
  bool geo_penalty = false;
};

/// Grammar:
///   line 1: `grid|geo full|subset|penalty kappa=<dec> tau=<dec>`
///   grid body: `x y [S] [pen=<dec>]`, one pixel per line
///   geo body: `point x y angles=a1,a2` (degrees) and
///             `obstacle x1 y1 x2 y2 ...`; penalty points add `pen=<dec>`
///   `#` starts a comment; blank lines are ignored.
/// Throws Error(SyntaxError) with a line number; semantic failures come
/// from the instance builders.
ParsedInstance parse_instance(const std::string& text);

std::string write_instance(const GridInstance& instance);
std::string write_instance(const GeometricInstance& gi, const std::vector<Rat>* penalties = nullptr);

/// Grid solution file: header, cost breakdown, optional bound/ratio, one
/// `cycle` line per cycle as comma-joined configurations.
struct SolutionFile {
  std::string goal = "cover";   // cover | tour
  std::string solver = "approx";
  CycleCover cover;
  CostBreakdown cost;
  std::optional<Rat> bound;      // LP lower bound or proven optimum
  std::optional<Rat> guarantee;  // factor for approx runs
};

std::string write_solution(const GridInstance& instance, const SolutionFile& solution);
SolutionFile parse_solution(const std::string& text);

std::string write_geo_solution(const GeoApproxResult& result, const std::string& goal);

}  // namespace turnsolve
