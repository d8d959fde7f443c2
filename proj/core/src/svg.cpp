#include "turnsolve/svg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace turnsolve {

namespace {

const char* kStrokes[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
constexpr int kScale = 24;

std::string fixed3(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << v;
  return out.str();
}

}  // namespace

std::string render_svg(const GridInstance& instance, const CycleCover& cover) {
  int min_x = instance.pixels()[0].x, max_x = min_x;
  int min_y = instance.pixels()[0].y, max_y = min_y;
  for (const Pixel& p : instance.pixels()) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  int width = (max_x - min_x + 1) * kScale;
  int height = (max_y - min_y + 1) * kScale;
  // Grid y grows north; SVG y grows down.
  auto sx = [&](int x) { return (x - min_x) * kScale; };
  auto sy = [&](int y) { return (max_y - y) * kScale; };
  auto cx = [&](int x) { return sx(x) + kScale / 2; };
  auto cy = [&](int y) { return sy(y) + kScale / 2; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  for (const Pixel& p : instance.pixels()) {
    std::string fill = "#f2f2f2";
    if (instance.variant() == CoverageVariant::Subset && instance.in_subset(p)) fill = "#ffd60a";
    if (instance.variant() == CoverageVariant::Penalty && instance.penalty(p) > 0)
      fill = "#ffb38a";
    out << "  <rect x=\"" << sx(p.x) << "\" y=\"" << sy(p.y) << "\" width=\"" << kScale
        << "\" height=\"" << kScale << "\" fill=\"" << fill
        << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
  }
  for (std::size_t i = 0; i < cover.cycles.size(); ++i) {
    const Cycle& cycle = cover.cycles[i];
    auto moves = cycle_moves(cycle);
    if (moves.empty()) continue;
    out << "  <path d=\"M " << cx(moves[0].from.x) << " " << cy(moves[0].from.y);
    for (std::size_t m = 0; m < moves.size(); ++m) {
      Pixel t = moves[m].target();
      out << " L " << cx(t.x) << " " << cy(t.y);
    }
    out << " Z\" fill=\"none\" stroke=\"" << kStrokes[i % 8]
        << "\" stroke-width=\"3\" stroke-linejoin=\"round\"/>\n";
    // Turn markers.
    std::set<Pixel> turns;
    for (const Pixel& p : cycle.covered_pixels())
      if (cycle.rotations_at(p) > 0) turns.insert(p);
    for (const Pixel& p : turns)
      out << "  <circle cx=\"" << cx(p.x) << "\" cy=\"" << cy(p.y) << "\" r=\"3\" fill=\""
          << kStrokes[i % 8] << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_svg_geo(const GeometricInstance& gi, const GeoApproxResult& result) {
  double min_x = rat_double(gi.points[0].x), max_x = min_x;
  double min_y = rat_double(gi.points[0].y), max_y = min_y;
  auto stretch = [&](const QPoint& p) {
    min_x = std::min(min_x, rat_double(p.x));
    max_x = std::max(max_x, rat_double(p.x));
    min_y = std::min(min_y, rat_double(p.y));
    max_y = std::max(max_y, rat_double(p.y));
  };
  for (const QPoint& p : gi.points) stretch(p);
  for (const Polygon& poly : gi.obstacles)
    for (const QPoint& p : poly) stretch(p);
  double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  double scale = 480.0 / span;
  double margin = 24;
  auto sx = [&](const QPoint& p) { return fixed3(margin + (rat_double(p.x) - min_x) * scale); };
  auto sy = [&](const QPoint& p) { return fixed3(margin + (max_y - rat_double(p.y)) * scale); };
  int width = static_cast<int>(2 * margin + (max_x - min_x) * scale) + 1;
  int height = static_cast<int>(2 * margin + (max_y - min_y) * scale) + 1;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  for (const Polygon& poly : gi.obstacles) {
    out << "  <polygon points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i)
      out << (i ? " " : "") << sx(poly[i]) << "," << sy(poly[i]);
    out << "\" fill=\"#cccccc\" stroke=\"#666666\"/>\n";
  }
  for (std::size_t i = 0; i < result.cycles.size(); ++i) {
    const GeoCycle& cycle = result.cycles[i];
    if (cycle.polyline.empty()) continue;
    out << "  <path d=\"M " << sx(cycle.polyline[0]) << " " << sy(cycle.polyline[0]);
    for (std::size_t k = 1; k < cycle.polyline.size(); ++k)
      out << " L " << sx(cycle.polyline[k]) << " " << sy(cycle.polyline[k]);
    out << " Z\" fill=\"none\" stroke=\"" << kStrokes[i % 8] << "\" stroke-width=\"2\"/>\n";
  }
  for (const QPoint& p : gi.points)
    out << "  <circle cx=\"" << sx(p) << "\" cy=\"" << sy(p) << "\" r=\"4\" fill=\"#111111\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace turnsolve
