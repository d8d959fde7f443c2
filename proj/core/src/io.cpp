#include "turnsolve/io.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace turnsolve {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void syntax_error(int line, const std::string& msg) {
  throw Error(Errc::SyntaxError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

Rat parse_rat(const std::string& text, int line) {
  auto r = rat_parse(text);
  if (!r) syntax_error(line, "bad number '" + text + "'");
  return *r;
}

std::optional<std::string> key_value(const std::string& tok, const std::string& key) {
  if (tok.rfind(key + "=", 0) != 0) return std::nullopt;
  return tok.substr(key.size() + 1);
}

long parse_int(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (used != text.size()) syntax_error(line, "bad integer '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    syntax_error(line, "bad integer '" + text + "'");
  }
}

}  // namespace

ParsedInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // Header.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    header = tokenize(line);
    if (!header.empty()) break;
  }
  if (header.size() != 4) syntax_error(lineno, "expected `grid|geo variant kappa=.. tau=..`");
  bool is_grid = header[0] == "grid";
  if (!is_grid && header[0] != "geo") syntax_error(lineno, "expected `grid` or `geo`");
  CoverageVariant variant;
  if (header[1] == "full")
    variant = CoverageVariant::Full;
  else if (header[1] == "subset")
    variant = CoverageVariant::Subset;
  else if (header[1] == "penalty")
    variant = CoverageVariant::Penalty;
  else
    syntax_error(lineno, "unknown variant '" + header[1] + "'");
  auto kappa_text = key_value(header[2], "kappa");
  auto tau_text = key_value(header[3], "tau");
  if (!kappa_text || !tau_text) syntax_error(lineno, "expected kappa=<dec> tau=<dec>");
  Rat kappa = parse_rat(*kappa_text, lineno);
  Rat tau = parse_rat(*tau_text, lineno);

  ParsedInstance out;
  if (is_grid) {
    std::vector<Pixel> pixels;
    std::vector<Pixel> subset;
    std::map<Pixel, Rat> penalties;
    while (std::getline(in, line)) {
      ++lineno;
      auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 2) syntax_error(lineno, "expected `x y [S] [pen=<dec>]`");
      Pixel p{static_cast<std::int32_t>(parse_int(tokens[0], lineno)),
              static_cast<std::int32_t>(parse_int(tokens[1], lineno))};
      pixels.push_back(p);
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (tokens[i] == "S") {
          subset.push_back(p);
        } else if (auto pen = key_value(tokens[i], "pen")) {
          penalties[p] = parse_rat(*pen, lineno);
        } else {
          syntax_error(lineno, "unknown attribute '" + tokens[i] + "'");
        }
      }
    }
    out.grid = build_grid_instance(std::move(pixels), variant, std::move(subset),
                                   std::move(penalties), std::move(kappa), std::move(tau));
    return out;
  }

  GeometricInstance gi;
  gi.kappa = rat_double(kappa);
  gi.tau = rat_double(tau);
  std::vector<Rat> penalties;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "point") {
      if (tokens.size() < 4) syntax_error(lineno, "expected `point x y angles=..`");
      QPoint p{parse_rat(tokens[1], lineno), parse_rat(tokens[2], lineno)};
      auto angles_text = key_value(tokens[3], "angles");
      if (!angles_text) syntax_error(lineno, "expected angles=a1,a2");
      std::vector<double> angles;
      std::istringstream alist(*angles_text);
      std::string item;
      while (std::getline(alist, item, ',')) {
        Rat degrees = parse_rat(item, lineno);
        angles.push_back(rat_double(degrees) * kPi / 180.0);  // degrees in files
      }
      if (angles.empty()) syntax_error(lineno, "point needs at least one angle");
      Rat pen(0);
      for (std::size_t i = 4; i < tokens.size(); ++i) {
        if (auto pv = key_value(tokens[i], "pen"))
          pen = parse_rat(*pv, lineno);
        else
          syntax_error(lineno, "unknown attribute '" + tokens[i] + "'");
      }
      gi.points.push_back(p);
      gi.orientations.push_back(std::move(angles));
      penalties.push_back(std::move(pen));
    } else if (tokens[0] == "obstacle") {
      if (tokens.size() < 7 || tokens.size() % 2 == 0)
        syntax_error(lineno, "obstacle needs at least three x y pairs");
      Polygon poly;
      for (std::size_t i = 1; i + 1 < tokens.size(); i += 2)
        poly.push_back({parse_rat(tokens[i], lineno), parse_rat(tokens[i + 1], lineno)});
      gi.obstacles.push_back(std::move(poly));
    } else {
      syntax_error(lineno, "expected `point` or `obstacle`");
    }
  }
  validate_geometry(gi);
  out.geo = std::move(gi);
  out.geo_penalty = variant == CoverageVariant::Penalty;
  if (out.geo_penalty) out.geo_penalties = std::move(penalties);
  if (variant == CoverageVariant::Subset)
    throw Error(Errc::ParamOutOfRange, "geometric instances support full or penalty coverage");
  return out;
}

std::string write_instance(const GridInstance& instance) {
  std::ostringstream out;
  const char* variant = instance.variant() == CoverageVariant::Full      ? "full"
                        : instance.variant() == CoverageVariant::Subset ? "subset"
                                                                         : "penalty";
  out << "grid " << variant << " kappa=" << rat_str(instance.kappa())
      << " tau=" << rat_str(instance.tau()) << "\n";
  for (const Pixel& p : instance.pixels()) {
    out << p.x << " " << p.y;
    if (instance.variant() == CoverageVariant::Subset && instance.in_subset(p)) out << " S";
    if (instance.variant() == CoverageVariant::Penalty) {
      Rat pen = instance.penalty(p);
      if (pen != 0) out << " pen=" << rat_str(pen);
    }
    out << "\n";
  }
  return out.str();
}

std::string write_instance(const GeometricInstance& gi, const std::vector<Rat>* penalties) {
  std::ostringstream out;
  out << "geo " << (penalties ? "penalty" : "full") << " kappa=";
  {
    std::ostringstream k, t;
    k.precision(12);
    t.precision(12);
    k << gi.kappa;
    t << gi.tau;
    out << k.str() << " tau=" << t.str() << "\n";
  }
  for (std::size_t i = 0; i < gi.points.size(); ++i) {
    out << "point " << rat_str(gi.points[i].x) << " " << rat_str(gi.points[i].y) << " angles=";
    for (std::size_t a = 0; a < gi.orientations[i].size(); ++a) {
      std::ostringstream deg;
      deg.precision(12);
      deg << gi.orientations[i][a] * 180.0 / kPi;
      out << (a ? "," : "") << deg.str();
    }
    if (penalties && (*penalties)[i] != 0) out << " pen=" << rat_str((*penalties)[i]);
    out << "\n";
  }
  for (const Polygon& poly : gi.obstacles) {
    out << "obstacle";
    for (const QPoint& v : poly) out << " " << rat_str(v.x) << " " << rat_str(v.y);
    out << "\n";
  }
  return out.str();
}

std::string write_solution(const GridInstance& instance, const SolutionFile& solution) {
  std::ostringstream out;
  out << "solution goal=" << solution.goal << " solver=" << solution.solver
      << " kappa=" << rat_str(instance.kappa()) << " tau=" << rat_str(instance.tau()) << "\n";
  out << "cost total=" << rat_str(solution.cost.total) << " turns=" << solution.cost.turns
      << " length=" << solution.cost.length << " penalty=" << rat_str(solution.cost.penalty_paid)
      << "\n";
  if (solution.bound) out << "bound " << rat_str(*solution.bound) << "\n";
  if (solution.guarantee) out << "guarantee " << rat_str(*solution.guarantee) << "\n";
  for (const Cycle& cycle : solution.cover.cycles) {
    out << "cycle";
    for (const Configuration& c : cycle.steps())
      out << " " << c.pixel.x << "," << c.pixel.y << "," << heading_char(c.heading);
    out << "\n";
  }
  return out.str();
}

SolutionFile parse_solution(const std::string& text) {
  SolutionFile sol;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "solution") {
      saw_header = true;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (auto v = key_value(tokens[i], "goal")) sol.goal = *v;
        if (auto v = key_value(tokens[i], "solver")) sol.solver = *v;
      }
    } else if (tokens[0] == "cost") {
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (auto v = key_value(tokens[i], "total")) sol.cost.total = parse_rat(*v, lineno);
        if (auto v = key_value(tokens[i], "turns")) sol.cost.turns = static_cast<int>(parse_int(*v, lineno));
        if (auto v = key_value(tokens[i], "length"))
          sol.cost.length = static_cast<int>(parse_int(*v, lineno));
        if (auto v = key_value(tokens[i], "penalty")) sol.cost.penalty_paid = parse_rat(*v, lineno);
      }
    } else if (tokens[0] == "bound" && tokens.size() == 2) {
      sol.bound = parse_rat(tokens[1], lineno);
    } else if (tokens[0] == "guarantee" && tokens.size() == 2) {
      sol.guarantee = parse_rat(tokens[1], lineno);
    } else if (tokens[0] == "cycle") {
      std::vector<Configuration> steps;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::istringstream cfg(tokens[i]);
        std::string xs, ys, hs;
        if (!std::getline(cfg, xs, ',') || !std::getline(cfg, ys, ',') || !std::getline(cfg, hs))
          syntax_error(lineno, "bad configuration '" + tokens[i] + "'");
        auto heading = hs.size() == 1 ? heading_from_char(hs[0]) : std::nullopt;
        if (!heading) syntax_error(lineno, "bad heading '" + hs + "'");
        steps.push_back({{static_cast<std::int32_t>(parse_int(xs, lineno)),
                          static_cast<std::int32_t>(parse_int(ys, lineno))},
                         *heading});
      }
      sol.cover.cycles.push_back(Cycle::unchecked(std::move(steps)));
    } else {
      syntax_error(lineno, "unknown solution line '" + tokens[0] + "'");
    }
  }
  if (!saw_header) throw Error(Errc::SyntaxError, "missing `solution` header");
  return sol;
}

std::string write_geo_solution(const GeoApproxResult& result, const std::string& goal) {
  std::ostringstream out;
  out << "geosolution goal=" << goal << " total=" << rat_str(result.total_cost)
      << " penalty=" << rat_str(result.penalty_paid) << " bound=" << rat_str(result.lp_lower_bound)
      << "\n";
  out.precision(9);
  out << std::fixed;
  for (const GeoCycle& cycle : result.cycles) {
    out << "geocycle cost=" << cycle.cost << " points";
    for (const QPoint& p : cycle.polyline) out << " " << rat_str(p.x) << "," << rat_str(p.y);
    out << "\n";
  }
  return out.str();
}

}  // namespace turnsolve
