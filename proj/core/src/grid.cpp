#include "turnsolve/grid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace turnsolve {

std::string to_string(Pixel p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

Heading opposite(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4);
}

Heading rotate_cw(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}

Heading rotate_ccw(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}

int turn_steps(Heading a, Heading b) {
  int d = (static_cast<int>(b) - static_cast<int>(a) + 4) % 4;
  return d == 3 ? 1 : d;
}

Pixel step(Pixel p, Heading h) {
  switch (h) {
    case Heading::North: return {p.x, p.y + 1};
    case Heading::East: return {p.x + 1, p.y};
    case Heading::South: return {p.x, p.y - 1};
    case Heading::West: return {p.x - 1, p.y};
  }
  return p;
}

char heading_char(Heading h) {
  switch (h) {
    case Heading::North: return 'N';
    case Heading::East: return 'E';
    case Heading::South: return 'S';
    case Heading::West: return 'W';
  }
  return '?';
}

std::optional<Heading> heading_from_char(char c) {
  switch (c) {
    case 'N': return Heading::North;
    case 'E': return Heading::East;
    case 'S': return Heading::South;
    case 'W': return Heading::West;
    default: return std::nullopt;
  }
}

std::optional<int> GridInstance::index_of(Pixel p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int GridInstance::degree(int pixel_index) const {
  int d = 0;
  for (int h = 0; h < kHeadingCount; ++h)
    if (neighbors_[pixel_index][h] >= 0) ++d;
  return d;
}

bool GridInstance::in_subset(Pixel p) const {
  return std::binary_search(subset_.begin(), subset_.end(), p);
}

Rat GridInstance::penalty(Pixel p) const {
  auto it = penalties_.find(p);
  return it == penalties_.end() ? Rat(0) : it->second;
}

std::vector<Pixel> GridInstance::required_pixels() const {
  switch (variant_) {
    case CoverageVariant::Full: return pixels_;
    case CoverageVariant::Subset: return subset_;
    case CoverageVariant::Penalty: return {};
  }
  return {};
}

GridInstance build_grid_instance(std::vector<Pixel> pixels, CoverageVariant variant,
                                 std::vector<Pixel> subset, std::map<Pixel, Rat> penalties,
                                 Rat kappa, Rat tau) {
  if (pixels.empty()) throw Error(Errc::EmptyInstance, "no pixels given");

  std::sort(pixels.begin(), pixels.end());
  for (std::size_t i = 1; i < pixels.size(); ++i)
    if (pixels[i] == pixels[i - 1])
      throw Error(Errc::DuplicatePixel, "pixel " + to_string(pixels[i]) + " listed twice");

  GridInstance inst;
  inst.pixels_ = std::move(pixels);
  inst.variant_ = variant;
  inst.kappa_ = std::move(kappa);
  inst.tau_ = std::move(tau);
  for (std::size_t i = 0; i < inst.pixels_.size(); ++i)
    inst.index_[inst.pixels_[i]] = static_cast<int>(i);

  inst.neighbors_.resize(inst.pixels_.size());
  for (std::size_t i = 0; i < inst.pixels_.size(); ++i)
    for (int h = 0; h < kHeadingCount; ++h) {
      auto n = inst.index_of(step(inst.pixels_[i], static_cast<Heading>(h)));
      inst.neighbors_[i][h] = n.value_or(-1);
    }

  // Connectivity by flood fill; the error message lists the components.
  std::vector<int> component(inst.pixels_.size(), -1);
  int components = 0;
  for (std::size_t s = 0; s < inst.pixels_.size(); ++s) {
    if (component[s] >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    component[s] = components;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int h = 0; h < kHeadingCount; ++h) {
        int n = inst.neighbors_[v][h];
        if (n >= 0 && component[n] < 0) {
          component[n] = components;
          stack.push_back(n);
        }
      }
    }
    ++components;
  }
  if (components > 1) {
    std::ostringstream msg;
    msg << components << " components:";
    for (int c = 0; c < components; ++c) {
      msg << (c ? " |" : "");
      for (std::size_t i = 0; i < inst.pixels_.size(); ++i)
        if (component[i] == c) msg << " " << to_string(inst.pixels_[i]);
    }
    throw Error(Errc::Disconnected, msg.str());
  }

  if (variant == CoverageVariant::Subset) {
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    for (const Pixel& p : subset)
      if (!inst.contains(p))
        throw Error(Errc::SubsetNotContained, "subset pixel " + to_string(p) + " not in instance");
    inst.subset_ = std::move(subset);
  }
  if (variant == CoverageVariant::Penalty) {
    for (const auto& [p, c] : penalties) {
      if (!inst.contains(p))
        throw Error(Errc::SubsetNotContained,
                    "penalty pixel " + to_string(p) + " not in instance");
      if (c < 0)
        throw Error(Errc::NegativePenalty, "penalty of " + to_string(p) + " is negative");
      if (c > 0) inst.penalties_[p] = c;  // canonical form: zeros are implicit
    }
  }
  return inst;
}

GridInstance full_instance(std::vector<Pixel> pixels, Rat kappa, Rat tau) {
  return build_grid_instance(std::move(pixels), CoverageVariant::Full, {}, {}, std::move(kappa),
                             std::move(tau));
}

std::string to_string(Configuration c) {
  return "(" + std::to_string(c.pixel.x) + "," + std::to_string(c.pixel.y) + "," +
         heading_char(c.heading) + ")";
}

Cycle Cycle::from_steps(std::vector<Configuration> steps) {
  Cycle cycle = unchecked(std::move(steps));
  if (auto defect = cycle.structural_defect()) throw Error(Errc::Infeasible, *defect);
  return cycle;
}

Cycle Cycle::unchecked(std::vector<Configuration> steps) {
  Cycle cycle;
  cycle.steps_ = std::move(steps);
  return cycle;
}

namespace {

enum class StepKind { Move, Rotation, Invalid };

StepKind classify(const Configuration& a, const Configuration& b) {
  if (a.pixel == b.pixel && turn_steps(a.heading, b.heading) == 1) return StepKind::Rotation;
  if (a.heading == b.heading && step(a.pixel, a.heading) == b.pixel) return StepKind::Move;
  return StepKind::Invalid;
}

}  // namespace

std::optional<std::string> Cycle::structural_defect() const {
  if (steps_.size() < 2) return "cycle has fewer than two steps";
  std::set<Pixel> distinct;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    distinct.insert(steps_[i].pixel);
    const Configuration& a = steps_[i];
    const Configuration& b = steps_[(i + 1) % steps_.size()];
    if (classify(a, b) == StepKind::Invalid)
      return "illegal step " + to_string(a) + " -> " + to_string(b);
  }
  if (distinct.size() < 2) return "cycle covers fewer than two distinct pixels";
  return std::nullopt;
}

int Cycle::length() const {
  int moves = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i)
    if (classify(steps_[i], steps_[(i + 1) % steps_.size()]) == StepKind::Move) ++moves;
  return moves;
}

int Cycle::simple_turns() const {
  int rotations = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i)
    if (classify(steps_[i], steps_[(i + 1) % steps_.size()]) == StepKind::Rotation) ++rotations;
  return rotations;
}

std::vector<Pixel> Cycle::covered_pixels() const {
  std::set<Pixel> s;
  for (const auto& c : steps_) s.insert(c.pixel);
  return {s.begin(), s.end()};
}

int Cycle::rotations_at(Pixel p) const {
  int rotations = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Configuration& a = steps_[i];
    if (a.pixel != p) continue;
    if (classify(a, steps_[(i + 1) % steps_.size()]) == StepKind::Rotation) ++rotations;
  }
  return rotations;
}

Cycle Cycle::reversed() const {
  // Reversing a walk flips each pose's heading and the step order.
  std::vector<Configuration> rev;
  rev.reserve(steps_.size());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
    rev.push_back({it->pixel, opposite(it->heading)});
  return unchecked(std::move(rev));
}

Cycle Cycle::rotated(int offset) const {
  std::vector<Configuration> rot;
  rot.reserve(steps_.size());
  int n = static_cast<int>(steps_.size());
  for (int i = 0; i < n; ++i) rot.push_back(steps_[(i + offset) % n]);
  return unchecked(std::move(rot));
}

Rat cycle_cost(const Cycle& cycle, const Rat& kappa, const Rat& tau) {
  return Rat(cycle.length()) * kappa + Rat(cycle.simple_turns()) * tau;
}

bool CycleCover::covers(Pixel p) const {
  for (const auto& c : cycles)
    for (const auto& s : c.steps())
      if (s.pixel == p) return true;
  return false;
}

std::vector<Pixel> CycleCover::covered_pixels() const {
  std::set<Pixel> s;
  for (const auto& c : cycles)
    for (const auto& st : c.steps()) s.insert(st.pixel);
  return {s.begin(), s.end()};
}

std::vector<Move> cycle_moves(const Cycle& cycle) {
  std::vector<Move> moves;
  const auto& steps = cycle.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Configuration& a = steps[i];
    const Configuration& b = steps[(i + 1) % steps.size()];
    if (a.heading == b.heading && step(a.pixel, a.heading) == b.pixel)
      moves.push_back({a.pixel, a.heading});
  }
  return moves;
}

Cycle cycle_from_moves(const std::vector<Move>& moves) {
  if (moves.size() < 2) throw Error(Errc::Infeasible, "move sequence too short");
  std::vector<Configuration> steps;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Move& prev = moves[(i + moves.size() - 1) % moves.size()];
    const Move& cur = moves[i];
    if (prev.target() != cur.from)
      throw Error(Errc::InconsistentPath, "move sequence does not chain");
    steps.push_back({cur.from, prev.heading});
    Heading h = prev.heading;
    while (h != cur.heading) {
      // Single 90-degree turns rotate toward the goal; u-turns go clockwise.
      h = rotate_ccw(h) == cur.heading ? rotate_ccw(h) : rotate_cw(h);
      steps.push_back({cur.from, h});
    }
  }
  return Cycle::from_steps(std::move(steps));
}

Rat moves_cost(const std::vector<Move>& moves, const Rat& kappa, const Rat& tau) {
  int turns = 0;
  for (std::size_t i = 0; i < moves.size(); ++i)
    turns += turn_steps(moves[(i + moves.size() - 1) % moves.size()].heading, moves[i].heading);
  return Rat(static_cast<int>(moves.size())) * kappa + Rat(turns) * tau;
}

CostBreakdown cover_cost(const GridInstance& instance, const CycleCover& cover) {
  CostBreakdown out;
  for (const auto& cycle : cover.cycles) {
    out.length += cycle.length();
    out.turns += cycle.simple_turns();
  }
  out.distance_cost = Rat(out.length) * instance.kappa();
  out.turn_cost = Rat(out.turns) * instance.tau();
  if (instance.variant() == CoverageVariant::Penalty) {
    std::set<Pixel> covered;
    for (const Pixel& p : cover.covered_pixels()) covered.insert(p);
    for (const auto& [p, c] : instance.penalties())
      if (!covered.count(p)) out.penalty_paid += c;
  }
  out.total = out.distance_cost + out.turn_cost + out.penalty_paid;
  return out;
}

}  // namespace turnsolve
