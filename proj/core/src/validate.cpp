#include "turnsolve/validate.hpp"

#include <map>
#include <set>
#include <sstream>

namespace turnsolve {

std::vector<FullStrip> full_strips(const GridInstance& instance) {
  std::vector<FullStrip> strips;
  std::set<Pixel> pixels(instance.pixels().begin(), instance.pixels().end());

  for (const Pixel& p : instance.pixels()) {
    // p starts a horizontal strip iff it has no west neighbor.
    if (!pixels.count({p.x - 1, p.y})) {
      FullStrip s{true, {}};
      for (Pixel q = p; pixels.count(q); q.x += 1) s.pixels.push_back(q);
      strips.push_back(std::move(s));
    }
    if (!pixels.count({p.x, p.y - 1})) {
      FullStrip s{false, {}};
      for (Pixel q = p; pixels.count(q); q.y += 1) s.pixels.push_back(q);
      strips.push_back(std::move(s));
    }
  }
  return strips;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  if (ok()) {
    out << "ok";
    return out.str();
  }
  if (!coverage_violations.empty()) {
    out << "uncovered:";
    for (const Pixel& p : coverage_violations) out << " " << to_string(p);
    out << "; ";
  }
  for (const auto& m : malformed_cycles) out << m << "; ";
  if (!off_instance_pixels.empty()) {
    out << "off-instance:";
    for (const Pixel& p : off_instance_pixels) out << " " << to_string(p);
    out << "; ";
  }
  for (const auto& v : parity_violations) out << v << "; ";
  return out.str();
}

ValidationReport validate_cycle_cover(const GridInstance& instance, const CycleCover& cover) {
  ValidationReport report;

  std::set<Pixel> covered;
  std::set<Pixel> off_instance;
  for (std::size_t i = 0; i < cover.cycles.size(); ++i) {
    const Cycle& cycle = cover.cycles[i];
    if (auto defect = cycle.structural_defect())
      report.malformed_cycles.push_back("cycle " + std::to_string(i) + ": " + *defect);
    for (const auto& c : cycle.steps()) {
      covered.insert(c.pixel);
      if (!instance.contains(c.pixel)) off_instance.insert(c.pixel);
    }
  }
  report.off_instance_pixels.assign(off_instance.begin(), off_instance.end());

  for (const Pixel& p : instance.required_pixels())
    if (!covered.count(p)) report.coverage_violations.push_back(p);

  report.recomputed_cost = cover_cost(instance, cover);

  // Strip parity: every full strip must carry an even number of simple
  // turns, u-turns counting twice (each u-turn is two rotation steps).
  std::map<Pixel, int> rotations;
  for (const auto& cycle : cover.cycles)
    for (const Pixel& p : cycle.covered_pixels()) rotations[p] += cycle.rotations_at(p);

  for (const FullStrip& strip : full_strips(instance)) {
    int total = 0;
    for (const Pixel& p : strip.pixels) {
      auto it = rotations.find(p);
      if (it != rotations.end()) total += it->second;
    }
    if (total % 2 != 0) {
      std::ostringstream msg;
      msg << (strip.horizontal ? "horizontal" : "vertical") << " strip at "
          << to_string(strip.pixels.front()) << " has odd turn count " << total;
      report.parity_violations.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace turnsolve
