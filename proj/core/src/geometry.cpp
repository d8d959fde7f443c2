#include "turnsolve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "turnsolve/approx.hpp"
#include "turnsolve/lp.hpp"
#include "turnsolve/matching.hpp"

namespace turnsolve {

int orientation(const QPoint& a, const QPoint& b, const QPoint& c) {
  Rat cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return cross > 0 ? 1 : cross < 0 ? -1 : 0;
}

bool on_segment(const QPoint& a, const QPoint& b, const QPoint& p) {
  if (orientation(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool point_on_polygon_boundary(const QPoint& p, const Polygon& poly) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (on_segment(poly[i], poly[(i + 1) % poly.size()], p)) return true;
  return false;
}

bool point_in_polygon(const QPoint& p, const Polygon& poly) {
  if (point_on_polygon_boundary(p, poly)) return false;
  // Exact crossing count with the half-open edge rule on a ray toward +x.
  bool inside = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const QPoint& a = poly[i];
    const QPoint& b = poly[(i + 1) % poly.size()];
    bool a_below = a.y <= p.y;
    bool b_below = b.y <= p.y;
    if (a_below == b_below) continue;
    // x coordinate of the edge at height p.y, compared exactly:
    // x = a.x + (p.y-a.y)*(b.x-a.x)/(b.y-a.y) > p.x
    Rat lhs = (a.x - p.x) * (b.y - a.y) + (p.y - a.y) * (b.x - a.x);
    if (b.y > a.y ? lhs > 0 : lhs < 0) inside = !inside;
  }
  return inside;
}

namespace {

bool proper_cross(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
  int o1 = orientation(a, b, c);
  int o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a);
  int o4 = orientation(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Parameter of p along segment (a,b); requires collinearity.
Rat segment_parameter(const QPoint& a, const QPoint& b, const QPoint& p) {
  Rat dx = b.x - a.x, dy = b.y - a.y;
  if (dx != 0) return (p.x - a.x) / dx;
  if (dy != 0) return (p.y - a.y) / dy;
  return 0;
}

QPoint interpolate(const QPoint& a, const QPoint& b, const Rat& t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

}  // namespace

bool segment_blocked(const QPoint& a, const QPoint& b, const Polygon& poly) {
  if (a == b) return point_in_polygon(a, poly);
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (proper_cross(a, b, poly[i], poly[(i + 1) % poly.size()])) return true;

  // Only boundary touches remain. Split the segment at every touch point
  // and test the interior of each piece.
  std::vector<Rat> params{Rat(0), Rat(1)};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const QPoint& v = poly[i];
    if (on_segment(a, b, v)) params.push_back(segment_parameter(a, b, v));
    // Segment endpoints lying on a polygon edge also split it.
    const QPoint& w = poly[(i + 1) % poly.size()];
    for (const QPoint* e : {&a, &b})
      if (on_segment(v, w, *e)) params.push_back(segment_parameter(a, b, *e));
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    Rat mid = (params[i] + params[i + 1]) / 2;
    if (mid < 0 || mid > 1) continue;
    if (point_in_polygon(interpolate(a, b, mid), poly)) return true;
  }
  return false;
}

void validate_geometry(const GeometricInstance& gi) {
  for (const Polygon& poly : gi.obstacles) {
    if (poly.size() < 3) throw Error(Errc::DegeneratePolygon, "fewer than three vertices");
    Rat area2(0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const QPoint& u = poly[i];
      const QPoint& v = poly[(i + 1) % poly.size()];
      if (u == v) throw Error(Errc::DegeneratePolygon, "repeated consecutive vertex");
      area2 += u.x * v.y - v.x * u.y;
    }
    if (area2 == 0) throw Error(Errc::DegeneratePolygon, "zero area");
    // Simplicity: non-adjacent edges must not cross or overlap.
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = i + 1; j < poly.size(); ++j) {
        if (j == i + 1 || (i == 0 && j + 1 == poly.size())) continue;
        const QPoint& p1 = poly[i];
        const QPoint& p2 = poly[(i + 1) % poly.size()];
        const QPoint& q1 = poly[j];
        const QPoint& q2 = poly[(j + 1) % poly.size()];
        if (proper_cross(p1, p2, q1, q2) || on_segment(p1, p2, q1) || on_segment(p1, p2, q2) ||
            on_segment(q1, q2, p1) || on_segment(q1, q2, p2))
          throw Error(Errc::DegeneratePolygon, "self-intersecting polygon");
      }
  }
  for (std::size_t i = 0; i < gi.points.size(); ++i) {
    for (const Polygon& poly : gi.obstacles)
      if (point_in_polygon(gi.points[i], poly))
        throw Error(Errc::PointInsideObstacle, "point " + std::to_string(i));
    if (i < gi.orientations.size() && gi.orientations[i].empty())
      throw Error(Errc::ParamOutOfRange, "point without orientations");
  }
}

int VisibilityGraph::vertex_of(const QPoint& p) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == p) return static_cast<int>(i);
  return -1;
}

bool VisibilityGraph::visible(int a, int b) const {
  return std::binary_search(neighbors[a].begin(), neighbors[a].end(), b);
}

VisibilityGraph visibility_graph(const std::vector<QPoint>& points,
                                 const std::vector<Polygon>& obstacles) {
  VisibilityGraph g;
  auto add_vertex = [&](const QPoint& p) {
    if (g.vertex_of(p) < 0) g.vertices.push_back(p);
  };
  for (const QPoint& p : points) add_vertex(p);
  for (const Polygon& poly : obstacles)
    for (const QPoint& v : poly) add_vertex(v);

  int n = static_cast<int>(g.vertices.size());
  g.neighbors.resize(n);
  g.lengths.resize(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (g.vertices[a] == g.vertices[b]) continue;
      bool blocked = false;
      for (const Polygon& poly : obstacles)
        if (segment_blocked(g.vertices[a], g.vertices[b], poly)) {
          blocked = true;
          break;
        }
      if (blocked) continue;
      double dx = rat_double(g.vertices[b].x - g.vertices[a].x);
      double dy = rat_double(g.vertices[b].y - g.vertices[a].y);
      double len = std::hypot(dx, dy);
      g.neighbors[a].push_back(b);
      g.lengths[a].push_back(len);
      g.neighbors[b].push_back(a);
      g.lengths[b].push_back(len);
    }
  return g;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double direction_of(const VisibilityGraph& vis, int from, int to) {
  double dx = rat_double(vis.vertices[to].x - vis.vertices[from].x);
  double dy = rat_double(vis.vertices[to].y - vis.vertices[from].y);
  return std::atan2(dy, dx);
}

// Absolute deviation between two directions, in [0, pi].
double deviation(double d1, double d2) {
  double diff = std::fmod(std::fabs(d1 - d2), 2 * kPi);
  return diff > kPi ? 2 * kPi - diff : diff;
}

double edge_length(const VisibilityGraph& vis, int from, int idx) {
  return vis.lengths[from][idx];
}

// Directed-edge node ids: per vertex, one node per outgoing neighbor slot.
struct SplitGraph {
  const VisibilityGraph& vis;
  std::vector<int> first_node;  // per vertex
  int node_count = 0;

  explicit SplitGraph(const VisibilityGraph& v) : vis(v) {
    first_node.resize(vis.vertices.size());
    for (std::size_t u = 0; u < vis.vertices.size(); ++u) {
      first_node[u] = node_count;
      node_count += static_cast<int>(vis.neighbors[u].size());
    }
  }
  int node(int from, int slot) const { return first_node[from] + slot; }
  std::pair<int, int> decode(int node) const {  // (from, slot)
    int from = static_cast<int>(std::upper_bound(first_node.begin(), first_node.end(), node) -
                                first_node.begin()) -
               1;
    return {from, node - first_node[from]};
  }
};

GeoPath split_dijkstra(const GeometricInstance& gi, const VisibilityGraph& vis,
                       const GeoConfiguration& a, const GeoConfiguration& b, bool forbid_inplace) {
  int va = vis.vertex_of(a.position);
  int vb = vis.vertex_of(b.position);
  if (va < 0 || vb < 0)
    throw Error(Errc::Unreachable, "configuration not on a visibility-graph vertex");

  // Degenerate in-place rotation.
  std::optional<double> best_direct;
  if (va == vb && !forbid_inplace) best_direct = gi.tau * deviation(a.direction, b.direction);

  SplitGraph split(vis);
  std::vector<double> dist(split.node_count, -1);
  std::vector<int> parent(split.node_count, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  for (std::size_t slot = 0; slot < vis.neighbors[va].size(); ++slot) {
    double dir = direction_of(vis, va, vis.neighbors[va][slot]);
    double cost = gi.tau * deviation(a.direction, dir) +
                  gi.kappa * edge_length(vis, va, static_cast<int>(slot));
    int node = split.node(va, static_cast<int>(slot));
    if (dist[node] < 0 || cost < dist[node]) {
      dist[node] = cost;
      queue.push({cost, node});
    }
  }

  std::optional<double> best_cost = best_direct;
  int best_final = -1;
  std::vector<char> done(split.node_count, 0);
  while (!queue.empty()) {
    auto [d, node] = queue.top();
    queue.pop();
    if (done[node]) continue;
    done[node] = 1;
    auto [from, slot] = split.decode(node);
    int at = vis.neighbors[from][slot];
    double in_dir = direction_of(vis, from, at);

    if (at == vb) {
      double total = d + gi.tau * deviation(in_dir, b.direction);
      if (!best_cost || total < *best_cost) {
        best_cost = total;
        best_final = node;
      }
    }
    for (std::size_t s2 = 0; s2 < vis.neighbors[at].size(); ++s2) {
      int next = vis.neighbors[at][s2];
      double out_dir = direction_of(vis, at, next);
      double cost = d + gi.tau * deviation(in_dir, out_dir) +
                    gi.kappa * edge_length(vis, at, static_cast<int>(s2));
      int nn = split.node(at, static_cast<int>(s2));
      if (dist[nn] < 0 || cost < dist[nn] - 1e-15) {
        dist[nn] = cost;
        parent[nn] = node;
        queue.push({cost, nn});
      }
    }
  }

  if (!best_cost) throw Error(Errc::Unreachable, "no visibility path");
  GeoPath path;
  path.cost = *best_cost;
  if (best_final < 0) {
    path.polyline = {va};
    if (va != vb) throw Error(Errc::Unreachable, "internal: missing final node");
    return path;
  }
  std::vector<int> rev;
  for (int node = best_final; node >= 0; node = parent[node]) {
    auto [from, slot] = split.decode(node);
    rev.push_back(vis.neighbors[from][slot]);
    if (parent[node] < 0) rev.push_back(from);
  }
  std::reverse(rev.begin(), rev.end());
  path.polyline = std::move(rev);
  return path;
}

}  // namespace

GeoPath turn_cost_shortest_path(const GeometricInstance& gi, const VisibilityGraph& vis,
                                const GeoConfiguration& a, const GeoConfiguration& b) {
  return split_dijkstra(gi, vis, a, b, false);
}

GeoPath turn_cost_moved_path(const GeometricInstance& gi, const VisibilityGraph& vis,
                             const GeoConfiguration& a, const GeoConfiguration& b) {
  return split_dijkstra(gi, vis, a, b, true);
}

GeoStrips geo_strip_costs(const GeometricInstance& gi) {
  validate_geometry(gi);
  if (gi.points.size() < 2)
    throw Error(Errc::NoLoopWitness, "geometric strips need at least two points");

  GeoStrips out;
  out.vis = visibility_graph(gi.points, gi.obstacles);

  std::vector<int> strips_per_owner;
  for (std::size_t p = 0; p < gi.points.size(); ++p)
    strips_per_owner.push_back(static_cast<int>(gi.orientations[p].size()));
  out.asg = AtomicStripGraph::make(strips_per_owner);

  // Side 1 faces alpha, side 0 faces alpha + pi (matching the grid layout
  // where side 1 is East/North).
  out.endpoint_config.resize(out.asg.vertex_count());
  for (int o = 0; o < out.asg.owner_count(); ++o)
    for (int s = 0; s < out.asg.strips_of(o); ++s) {
      double alpha = gi.orientations[o][s];
      out.endpoint_config[out.asg.vertex_id(o, s, 1)] = {gi.points[o], alpha};
      out.endpoint_config[out.asg.vertex_id(o, s, 0)] = {gi.points[o], alpha + kPi};
    }

  for (int a = 0; a < out.asg.vertex_count(); ++a)
    for (int b = a; b < out.asg.vertex_count(); ++b) {
      const GeoConfiguration& ca = out.endpoint_config[a];
      const GeoConfiguration& cb = out.endpoint_config[out.asg.sibling(b)];
      GeoPath path = out.asg.is_loop_like(a, b) ? turn_cost_moved_path(gi, out.vis, ca, cb)
                                                : turn_cost_shortest_path(gi, out.vis, ca, cb);
      out.asg.set_cost(a, b, Rat(path.cost));
    }

  out.asg = metric_close(std::move(out.asg));
  return out;
}

namespace {

GeoApproxResult geo_pipeline(const GeometricInstance& gi, const std::vector<Rat>* penalties,
                             bool want_tour) {
  GeoStrips strips = geo_strip_costs(gi);
  AtomicStripGraph asg = strips.asg;
  if (penalties) {
    if (penalties->size() != gi.points.size())
      throw Error(Errc::ParamOutOfRange, "penalty vector size mismatch");
    asg = penalty_to_full(asg, *penalties);
  }

  CycleCoverLp cc = build_cc_lp(asg);
  FractionalSolution frac = solve_cc_lp(cc);
  std::vector<int> chosen = dominant_strips(frac, asg);

  WeightedGraph endpoints(2 * asg.owner_count());
  std::vector<int> endpoint_of(2 * asg.owner_count());
  for (int o = 0; o < asg.owner_count(); ++o)
    for (int side = 0; side < 2; ++side)
      endpoint_of[2 * o + side] = asg.endpoint(asg.global_strip(o, chosen[o]), side);
  for (int u = 0; u < 2 * asg.owner_count(); ++u)
    for (int v = u + 1; v < 2 * asg.owner_count(); ++v)
      endpoints.set_weight(u, v, asg.cost(endpoint_of[u], endpoint_of[v]));
  Matching matched = min_weight_perfect_matching(endpoints);

  // Abstract cycles over matching vertices.
  std::vector<int> partner(2 * asg.owner_count(), -1);
  for (const auto& [u, v] : matched.edges) {
    partner[u] = v;
    partner[v] = u;
  }
  std::vector<std::vector<int>> cycles;  // matching-vertex sequences
  std::vector<char> visited(2 * asg.owner_count(), 0);
  for (int start = 0; start < 2 * asg.owner_count(); ++start) {
    if (visited[start]) continue;
    std::vector<int> cyc;
    int a = start;
    do {
      visited[a] = 1;
      int b = partner[a];
      visited[b] = 1;
      cyc.push_back(a);
      cyc.push_back(b);
      a = b ^ 1;
    } while (a != start);
    cycles.push_back(std::move(cyc));
  }

  auto cycle_cost_of = [&](const std::vector<int>& cyc) {
    Rat total(0);
    for (std::size_t i = 0; i + 1 < cyc.size(); i += 2)
      total += asg.cost(endpoint_of[cyc[i]], endpoint_of[cyc[i + 1]]);
    return total;
  };

  // Drop gadget cycles (penalty variant): cycles whose owners are all
  // auxiliary, one real owner plus its own gadget, or a lone strip whose
  // self-connection is the gadget-priced skip (its witness is auxiliary).
  std::vector<std::vector<int>> kept;
  std::set<int> covered_real;
  for (auto& cyc : cycles) {
    std::set<int> real;
    bool aux_present = false;
    for (std::size_t i = 0; i < cyc.size(); i += 2) {
      int owner = cyc[i] / 2;
      if (asg.is_aux(owner))
        aux_present = true;
      else
        real.insert(owner);
    }
    if (real.empty() || (aux_present && real.size() <= 1)) continue;  // phantom
    if (!aux_present && real.size() == 1 && cyc.size() == 2) {
      const ViaRecord& via = asg.via(endpoint_of[cyc[0]], endpoint_of[cyc[1]]);
      if (via.strip >= 0 && asg.is_aux(asg.strip_owner(via.strip))) continue;
    }
    for (int o : real) covered_real.insert(o);
    kept.push_back(std::move(cyc));
  }

  if (want_tour && kept.size() > 1) {
    // Greedy pairwise merges by matched-edge swap: replacing edges
    // (a1,b1) and (a2,b2) by (a1,b2) and (a2,b1) joins two cycles.
    while (kept.size() > 1) {
      std::optional<Rat> best_delta;
      std::size_t bi = 0, bj = 0, be1 = 0, be2 = 0;
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
          for (std::size_t e1 = 0; e1 + 1 < kept[i].size(); e1 += 2)
            for (std::size_t e2 = 0; e2 + 1 < kept[j].size(); e2 += 2) {
              int a1 = kept[i][e1], b1 = kept[i][e1 + 1];
              int a2 = kept[j][e2], b2 = kept[j][e2 + 1];
              Rat delta = asg.cost(endpoint_of[a1], endpoint_of[b2]) +
                          asg.cost(endpoint_of[a2], endpoint_of[b1]) -
                          asg.cost(endpoint_of[a1], endpoint_of[b1]) -
                          asg.cost(endpoint_of[a2], endpoint_of[b2]);
              if (!best_delta || delta < *best_delta) {
                best_delta = std::move(delta);
                bi = i;
                bj = j;
                be1 = e1;
                be2 = e2;
              }
            }
      // Apply the swap: new cycle = i's part up to a1, then j's cycle from
      // b2 around to a2, then back to b1 and the rest of i.
      std::vector<int>& ci = kept[bi];
      std::vector<int>& cj = kept[bj];
      std::vector<int> merged;
      merged.insert(merged.end(), ci.begin(), ci.begin() + static_cast<long>(be1) + 1);
      for (std::size_t k = 0; k < cj.size(); ++k)
        merged.push_back(cj[(be2 + 1 + k) % cj.size()]);
      merged.insert(merged.end(), ci.begin() + static_cast<long>(be1) + 1, ci.end());
      kept[bi] = std::move(merged);
      kept.erase(kept.begin() + static_cast<long>(bj));
    }
  }

  GeoApproxResult result;
  result.lp_lower_bound = frac.objective;
  result.guarantee = 2 * asg.omega();
  for (auto& cyc : kept) {
    GeoCycle gc;
    Rat total = cycle_cost_of(cyc);
    gc.cost = rat_double(total);
    result.total_cost += total;
    for (std::size_t i = 0; i < cyc.size(); i += 2) {
      int ea = endpoint_of[cyc[i]];
      int eb = endpoint_of[cyc[i + 1]];
      gc.endpoints.push_back(ea);
      gc.endpoints.push_back(eb);
      if (asg.is_aux(asg.vertex(ea).owner) || asg.is_aux(asg.vertex(eb).owner)) continue;
      const GeoConfiguration& ca = strips.endpoint_config[ea];
      const GeoConfiguration& cb = strips.endpoint_config[strips.asg.sibling(eb)];
      GeoPath leg = strips.asg.is_loop_like(ea, eb) ? turn_cost_moved_path(gi, strips.vis, ca, cb)
                                                    : turn_cost_shortest_path(gi, strips.vis, ca, cb);
      for (std::size_t k = 0; k < leg.polyline.size(); ++k) {
        if (!gc.polyline.empty() && k == 0 &&
            strips.vis.vertices[leg.polyline[0]] == gc.polyline.back())
          continue;
        gc.polyline.push_back(strips.vis.vertices[leg.polyline[k]]);
      }
    }
    result.cycles.push_back(std::move(gc));
  }
  if (penalties)
    for (std::size_t p = 0; p < gi.points.size(); ++p)
      if (!covered_real.count(static_cast<int>(p))) result.penalty_paid += (*penalties)[p];
  result.total_cost += result.penalty_paid;
  return result;
}

}  // namespace

GeoApproxResult geo_approx_cycle_cover(const GeometricInstance& gi,
                                       const std::vector<Rat>* penalties) {
  return geo_pipeline(gi, penalties, false);
}

GeoApproxResult geo_approx_tour(const GeometricInstance& gi, const std::vector<Rat>* penalties) {
  return geo_pipeline(gi, penalties, true);
}

}  // namespace turnsolve
