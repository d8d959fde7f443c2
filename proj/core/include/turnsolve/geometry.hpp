#pragma once

#include <optional>
#include <vector>

#include "turnsolve/strips.hpp"

namespace turnsolve {

/// Planar point with exact rational coordinates. All visibility predicates
/// are exact; only cost evaluation (lengths, angles) uses doubles.
struct QPoint {
  Rat x;
  Rat y;

  bool operator==(const QPoint& o) const { return x == o.x && y == o.y; }
  bool operator<(const QPoint& o) const { return x < o.x || (x == o.x && y < o.y); }
};

using Polygon = std::vector<QPoint>;

/// Sign of the cross product (b-a) x (c-a): 1 left turn, -1 right, 0 collinear.
int orientation(const QPoint& a, const QPoint& b, const QPoint& c);
bool on_segment(const QPoint& a, const QPoint& b, const QPoint& p);
/// Strictly inside (boundary does not count).
bool point_in_polygon(const QPoint& p, const Polygon& poly);
bool point_on_polygon_boundary(const QPoint& p, const Polygon& poly);
/// Does the open segment (a,b) meet the polygon's interior? Boundary
/// contact (grazing along edges, touching vertices) is allowed.
bool segment_blocked(const QPoint& a, const QPoint& b, const Polygon& poly);

struct GeometricInstance {
  std::vector<QPoint> points;
  std::vector<std::vector<double>> orientations;  // per point, angles in [0, pi)
  std::vector<Polygon> obstacles;
  double kappa = 1;  // cost per unit Euclidean length
  double tau = 1;    // cost per radian of turning
};

/// Validates geometry: polygons simple and non-degenerate, no instance
/// point strictly inside an obstacle, at least one orientation per point.
void validate_geometry(const GeometricInstance& gi);

struct VisibilityGraph {
  std::vector<QPoint> vertices;  // instance points first, then obstacle vertices
  std::vector<std::vector<int>> neighbors;  // ascending vertex ids
  std::vector<std::vector<double>> lengths;

  int vertex_of(const QPoint& p) const;  // -1 if absent
  bool visible(int a, int b) const;
};

/// Vertices are the instance points plus all obstacle corners; an edge
/// exists iff the open segment avoids every obstacle interior.
VisibilityGraph visibility_graph(const std::vector<QPoint>& points,
                                 const std::vector<Polygon>& obstacles);

struct GeoConfiguration {
  QPoint position;
  double direction = 0;  // radians in [0, 2*pi)
};

struct GeoPath {
  double cost = 0;
  std::vector<int> polyline;  // visibility-graph vertex ids, start to end
};

/// Minimum kappa*length + tau*|turn angles| walk along visibility edges
/// from a to b, charging the deviation from a.direction at the start and
/// the alignment to b.direction at the end. Both endpoints must sit on
/// visibility-graph vertices. Throws Error(Unreachable) when blocked.
GeoPath turn_cost_shortest_path(const GeometricInstance& gi, const VisibilityGraph& vis,
                                const GeoConfiguration& a, const GeoConfiguration& b);

/// Same, but the walk must leave the start vertex (used for loop-like
/// strip entries, where the plain path would degenerate to a rotation).
GeoPath turn_cost_moved_path(const GeometricInstance& gi, const VisibilityGraph& vis,
                             const GeoConfiguration& a, const GeoConfiguration& b);

/// Atomic strips of a geometric instance: one strip per orientation alpha
/// with endpoint directions alpha + pi (side 0) and alpha (side 1), edge
/// costs from turn_cost_shortest_path, loop-like entries from the moved
/// variant, metrically closed. Costs are exact rationalizations of the
/// double values.
struct GeoStrips {
  AtomicStripGraph asg;
  VisibilityGraph vis;
  std::vector<GeoConfiguration> endpoint_config;  // per ASG vertex
};

GeoStrips geo_strip_costs(const GeometricInstance& gi);

struct GeoCycle {
  std::vector<int> endpoints;     // ASG endpoint ids in traversal order
  std::vector<QPoint> polyline;   // realized bends (vertices of vis graph)
  double cost = 0;
};

struct GeoApproxResult {
  std::vector<GeoCycle> cycles;
  Rat lp_lower_bound = 0;
  Rat total_cost = 0;  // rationalized edge costs, penalties included
  Rat penalty_paid = 0;
  Rat guarantee = 0;
};

/// The 2-omega pipeline on a geometric instance (full coverage, or penalty
/// coverage when `penalties` is given per point).
GeoApproxResult geo_approx_cycle_cover(const GeometricInstance& gi,
                                       const std::vector<Rat>* penalties = nullptr);

/// Cycle cover followed by greedy pairwise cycle merges (matched-edge
/// swaps, exact in the strip cost table) until a single cycle remains.
GeoApproxResult geo_approx_tour(const GeometricInstance& gi,
                                const std::vector<Rat>* penalties = nullptr);

}  // namespace turnsolve
