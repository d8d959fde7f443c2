#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "turnsolve/geometry.hpp"

using namespace turnsolve;

namespace {

constexpr double kPi = 3.14159265358979323846;

Polygon square(int x0, int y0, int size) {
  return {{Rat(x0), Rat(y0)},
          {Rat(x0 + size), Rat(y0)},
          {Rat(x0 + size), Rat(y0 + size)},
          {Rat(x0), Rat(y0 + size)}};
}

GeometricInstance two_points(double tau = 1) {
  GeometricInstance gi;
  gi.points = {{Rat(0), Rat(0)}, {Rat(10), Rat(0)}};
  gi.orientations = {{0.0}, {0.0}};
  gi.kappa = 1;
  gi.tau = tau;
  return gi;
}

// Plain Euclidean shortest path on the visibility graph (independent of
// the turn-cost machinery).
double euclid_sp(const VisibilityGraph& vis, int a, int b) {
  std::vector<double> dist(vis.vertices.size(), -1);
  dist[a] = 0;
  std::vector<char> done(vis.vertices.size(), 0);
  while (true) {
    int best = -1;
    for (std::size_t v = 0; v < dist.size(); ++v)
      if (!done[v] && dist[v] >= 0 && (best < 0 || dist[v] < dist[best])) best = static_cast<int>(v);
    if (best < 0) break;
    done[best] = 1;
    for (std::size_t s = 0; s < vis.neighbors[best].size(); ++s) {
      int w = vis.neighbors[best][s];
      double cand = dist[best] + vis.lengths[best][s];
      if (dist[w] < 0 || cand < dist[w]) dist[w] = cand;
    }
  }
  return dist[b];
}

std::mt19937 g_rng(997);

GeometricInstance random_scene(int obstacles, int extra_points) {
  GeometricInstance gi;
  std::uniform_int_distribution<int> coord(0, 18);
  std::uniform_int_distribution<int> size(1, 3);
  std::uniform_real_distribution<double> angle(0, kPi);
  for (int o = 0; o < obstacles; ++o) {
    // Disjoint squares on a coarse lattice keep the geometry simple.
    gi.obstacles.push_back(square(2 + 5 * o, 4 + (o % 2) * 3, 1 + size(g_rng) % 2));
  }
  auto blocked = [&](const QPoint& p) {
    for (const auto& poly : gi.obstacles)
      if (point_in_polygon(p, poly) || point_on_polygon_boundary(p, poly)) return true;
    return false;
  };
  while (static_cast<int>(gi.points.size()) < extra_points) {
    QPoint p{Rat(coord(g_rng)), Rat(coord(g_rng))};
    if (blocked(p)) continue;
    bool dup = false;
    for (const auto& q : gi.points) dup = dup || q == p;
    if (dup) continue;
    gi.points.push_back(p);
    gi.orientations.push_back({angle(g_rng)});
  }
  return gi;
}

}  // namespace

TEST_CASE("exact predicates") {
  QPoint a{Rat(0), Rat(0)}, b{Rat(4), Rat(0)}, c{Rat(2), Rat(3)};
  CHECK(orientation(a, b, c) == 1);
  CHECK(orientation(a, c, b) == -1);
  CHECK(orientation(a, b, {Rat(2), Rat(0)}) == 0);
  CHECK(on_segment(a, b, {Rat(2), Rat(0)}));
  CHECK_FALSE(on_segment(a, b, {Rat(5), Rat(0)}));

  Polygon sq = square(0, 0, 2);
  CHECK(point_in_polygon({Rat(1), Rat(1)}, sq));
  CHECK_FALSE(point_in_polygon({Rat(3), Rat(1)}, sq));
  CHECK_FALSE(point_in_polygon({Rat(0), Rat(1)}, sq));  // boundary is outside
  CHECK(point_on_polygon_boundary({Rat(0), Rat(1)}, sq));
}

TEST_CASE("segment blocking with boundary contact allowed") {
  Polygon sq = square(2, -1, 2);
  QPoint a{Rat(0), Rat(0)}, b{Rat(10), Rat(0)};
  CHECK(segment_blocked(a, b, sq));  // passes through the interior
  // Grazing along the top edge y=1 is allowed.
  CHECK_FALSE(segment_blocked({Rat(0), Rat(1)}, {Rat(10), Rat(1)}, sq));
  // Touching a corner is allowed.
  CHECK_FALSE(segment_blocked({Rat(1), Rat(2)}, {Rat(3), Rat(0)}, {square(3, 0, 2)}));
}

TEST_CASE("degenerate polygons and interior points are rejected") {
  GeometricInstance gi = two_points();
  gi.obstacles.push_back({{Rat(0), Rat(0)}, {Rat(1), Rat(0)}});
  CHECK_THROWS_AS(validate_geometry(gi), Error);
  gi.obstacles = {square(-1, -1, 2)};
  CHECK_THROWS_AS(validate_geometry(gi), Error);  // point (0,0) inside
}

TEST_CASE("visibility graph around a square") {
  std::vector<QPoint> pts{{Rat(0), Rat(0)}, {Rat(10), Rat(0)}};
  std::vector<Polygon> obstacles{square(4, -1, 2)};
  VisibilityGraph vis = visibility_graph(pts, obstacles);
  REQUIRE(vis.vertices.size() == 6);
  int a = vis.vertex_of(pts[0]);
  int b = vis.vertex_of(pts[1]);
  CHECK_FALSE(vis.visible(a, b));  // square straddles the direct line
  // Both see the square's near corners.
  CHECK(vis.visible(a, vis.vertex_of({Rat(4), Rat(1)})));
  // Symmetry.
  for (std::size_t u = 0; u < vis.vertices.size(); ++u)
    for (int v : vis.neighbors[u]) CHECK(vis.visible(v, static_cast<int>(u)));
}

TEST_CASE("two points with no obstacles see each other") {
  std::vector<QPoint> pts{{Rat(0), Rat(0)}, {Rat(3), Rat(4)}};
  VisibilityGraph vis = visibility_graph(pts, {});
  CHECK(vis.visible(0, 1));
  CHECK(vis.lengths[0][0] == doctest::Approx(5.0));
}

TEST_CASE("straight aligned transfer costs its distance") {
  GeometricInstance gi = two_points();
  VisibilityGraph vis = visibility_graph(gi.points, gi.obstacles);
  GeoPath p = turn_cost_shortest_path(gi, vis, {{Rat(0), Rat(0)}, 0.0}, {{Rat(10), Rat(0)}, 0.0});
  CHECK(p.cost == doctest::Approx(10.0));
  CHECK(p.polyline.size() == 2);
}

TEST_CASE("perpendicular hop pays pi of turning") {
  GeometricInstance gi;
  gi.points = {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}};
  gi.orientations = {{0.0}, {0.0}};
  gi.kappa = 1;
  gi.tau = 1;
  VisibilityGraph vis = visibility_graph(gi.points, gi.obstacles);
  // Facing +x at both ends, moving straight up: turn pi/2 up and pi/2 back.
  GeoPath p = turn_cost_shortest_path(gi, vis, {{Rat(0), Rat(0)}, 0.0}, {{Rat(0), Rat(1)}, 0.0});
  CHECK(p.cost == doctest::Approx(1.0 + kPi));
}

TEST_CASE("paths bend around obstacle corners") {
  GeometricInstance gi = two_points(0.25);
  gi.obstacles = {square(4, -1, 2)};
  VisibilityGraph vis = visibility_graph(gi.points, gi.obstacles);
  GeoPath p = turn_cost_shortest_path(gi, vis, {{Rat(0), Rat(0)}, 0.0}, {{Rat(10), Rat(0)}, 0.0});
  REQUIRE(p.polyline.size() > 2);
  // Interior bends lie on obstacle vertices.
  for (std::size_t i = 1; i + 1 < p.polyline.size(); ++i) {
    bool corner = false;
    for (const QPoint& v : gi.obstacles[0]) corner = corner || vis.vertices[p.polyline[i]] == v;
    CHECK(corner);
  }
}

TEST_CASE("with tau=0 the turn-cost path equals the Euclidean one") {
  for (int trial = 0; trial < 50; ++trial) {
    GeometricInstance gi = random_scene(trial % 4, 2 + trial % 3);
    gi.tau = 0;
    VisibilityGraph vis = visibility_graph(gi.points, gi.obstacles);
    if (vis.vertices.size() > 20) continue;
    int a = vis.vertex_of(gi.points[0]);
    int b = vis.vertex_of(gi.points[1]);
    GeoPath p = turn_cost_shortest_path(gi, vis, {gi.points[0], 0.3}, {gi.points[1], 1.2});
    double plain = euclid_sp(vis, a, b);
    CHECK(std::fabs(p.cost - plain) <= 1e-9 * std::max(1.0, plain));
  }
}

TEST_CASE("reversal symmetry of turn-cost paths") {
  GeometricInstance gi = random_scene(2, 3);
  VisibilityGraph vis = visibility_graph(gi.points, gi.obstacles);
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  for (int q = 0; q < 20; ++q) {
    const QPoint& pa = gi.points[q % gi.points.size()];
    const QPoint& pb = gi.points[(q + 1) % gi.points.size()];
    double d1 = angle(g_rng), d2 = angle(g_rng);
    GeoPath fwd = turn_cost_shortest_path(gi, vis, {pa, d1}, {pb, d2});
    GeoPath rev = turn_cost_shortest_path(gi, vis, {pb, d2 + kPi}, {pa, d1 + kPi});
    CHECK(std::fabs(fwd.cost - rev.cost) <= 1e-9 * std::max(1.0, fwd.cost));
  }
}

TEST_CASE("geo strips: aligned pair crosses for free, opposed pair turns twice") {
  GeometricInstance gi = two_points();
  GeoStrips strips = geo_strip_costs(gi);
  const AtomicStripGraph& g = strips.asg;
  int pE = g.vertex_id(0, 0, 1);  // facing alpha = 0 (+x)
  int pW = g.vertex_id(0, 0, 0);
  int qE = g.vertex_id(1, 0, 1);
  int qW = g.vertex_id(1, 0, 0);
  CHECK(rat_double(g.cost(pE, qW)) == doctest::Approx(10.0));            // kappa * distance
  CHECK(rat_double(g.cost(pW, qE)) == doctest::Approx(10.0 + 2 * kPi));  // two turnarounds
  CHECK(check_pseudo_triangle(g).empty());
}

TEST_CASE("geo strip graphs satisfy the pseudo-triangle inequalities") {
  for (int trial = 0; trial < 10; ++trial) {
    GeometricInstance gi = random_scene(trial % 3, 2 + trial % 3);
    GeoStrips strips = geo_strip_costs(gi);
    CHECK(check_pseudo_triangle(strips.asg).empty());
  }
}

TEST_CASE("geometric cycle cover pipeline") {
  GeometricInstance gi;
  gi.points = {{Rat(0), Rat(0)}, {Rat(4), Rat(0)}, {Rat(4), Rat(3)}, {Rat(0), Rat(3)}};
  gi.orientations = {{0.0}, {kPi / 2}, {0.0}, {kPi / 2}};
  gi.kappa = 1;
  gi.tau = 0.5;
  GeoApproxResult res = geo_approx_cycle_cover(gi);
  CHECK(!res.cycles.empty());
  CHECK(res.lp_lower_bound > 0);
  CHECK(res.total_cost <= res.guarantee * res.lp_lower_bound);
  // omega = 1 per point here, so the guarantee is 2.
  CHECK(res.guarantee == 2);
}

TEST_CASE("geometric tour merges everything into one cycle") {
  GeometricInstance gi;
  gi.points = {{Rat(0), Rat(0)}, {Rat(6), Rat(0)}, {Rat(6), Rat(5)}, {Rat(0), Rat(5)}};
  gi.orientations = {{0.0, kPi / 2}, {0.0}, {0.0, kPi / 2}, {0.0}};
  gi.kappa = 1;
  gi.tau = 1;
  GeoApproxResult res = geo_approx_tour(gi);
  CHECK(res.cycles.size() == 1);
  CHECK(res.total_cost >= res.lp_lower_bound);
}

TEST_CASE("geometric penalty pipeline can skip an expensive outlier") {
  GeometricInstance gi;
  gi.points = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(100), Rat(0)}};
  gi.orientations = {{0.0}, {0.0}, {0.0}};
  gi.kappa = 1;
  gi.tau = 1;
  std::vector<Rat> penalties{Rat(1000), Rat(1000), Rat(1)};
  GeoApproxResult res = geo_approx_cycle_cover(gi, &penalties);
  CHECK(res.penalty_paid == 1);
  CHECK(res.total_cost <= res.guarantee * res.lp_lower_bound);
}
