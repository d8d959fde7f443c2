#include "turnsolve/exact.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "turnsolve/approx.hpp"
#include "turnsolve/lp.hpp"
#include "turnsolve/matching.hpp"
#include "turnsolve/strips.hpp"
#include "turnsolve/transition.hpp"

namespace turnsolve {

namespace {

int side_toward(const GridInstance& inst, int from_pixel, int to_pixel) {
  for (int h = 0; h < kHeadingCount; ++h)
    if (inst.neighbor(from_pixel, static_cast<Heading>(h)) == to_pixel) return h;
  throw Error(Errc::InconsistentPath, "pixels are not adjacent");
}

int opposite_side(int side) { return (side + 2) % 4; }

int traversal_turns(int side_a, int side_b) {
  if (side_a == side_b) return 2;
  if (opposite_side(side_a) == side_b) return 0;
  return 1;
}

}  // namespace

TransitionModel::TransitionModel(const GridInstance& instance, int traversal_cap)
    : instance_(&instance), cap_(traversal_cap) {
  const int n = instance.size();
  by_pixel_.resize(n);
  for (int j = 0; j < n; ++j)
    for (int sa = 0; sa < kHeadingCount; ++sa) {
      if (instance.neighbor(j, static_cast<Heading>(sa)) < 0) continue;
      for (int sb = sa; sb < kHeadingCount; ++sb) {
        if (instance.neighbor(j, static_cast<Heading>(sb)) < 0) continue;
        by_pixel_[j].push_back(static_cast<int>(traversals_.size()));
        traversals_.push_back({j, sa, sb, traversal_turns(sa, sb)});
      }
    }

  // Objective: kappa per traversal (one unit of length) plus tau per turn.
  for (int v = 0; v < traversal_count(); ++v) {
    const Traversal& t = traversals_[v];
    Rat cost = instance.kappa() + Rat(t.turns) * instance.tau();
    lp_.add_variable("t" + std::to_string(v), cost, 0, Rat(cap_));
  }
  if (instance.variant() == CoverageVariant::Penalty) {
    coverage_vars_ = true;
    for (int j = 0; j < n; ++j) {
      Rat rho = instance.penalty(instance.pixel(j));
      offset_ += rho;
      lp_.add_variable("u" + std::to_string(j), -rho, 0, Rat(1));
    }
  }

  // Coverage rows.
  switch (instance.variant()) {
    case CoverageVariant::Full:
      for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, Rat>> terms;
        for (int v : by_pixel_[j]) terms.push_back({v, Rat(1)});
        lp_.add_row("cover" + std::to_string(j), std::move(terms), '>', 1);
      }
      break;
    case CoverageVariant::Subset:
      for (const Pixel& p : instance.subset()) {
        int j = *instance.index_of(p);
        std::vector<std::pair<int, Rat>> terms;
        for (int v : by_pixel_[j]) terms.push_back({v, Rat(1)});
        lp_.add_row("cover" + std::to_string(j), std::move(terms), '>', 1);
      }
      break;
    case CoverageVariant::Penalty:
      for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, Rat>> terms;
        for (int v : by_pixel_[j]) terms.push_back({v, Rat(1)});
        terms.push_back({u_index(j), Rat(-1)});
        lp_.add_row("cover" + std::to_string(j), std::move(terms), '>', 0);
      }
      break;
  }

  // Edge balance: the crossings of every grid edge counted from both ends
  // agree. U-turn traversals use their edge twice.
  for (int a = 0; a < n; ++a)
    for (int h = 0; h < kHeadingCount; ++h) {
      int b = instance.neighbor(a, static_cast<Heading>(h));
      if (b <= a) continue;
      std::vector<std::pair<int, Rat>> terms;
      auto add_side = [&](int pixel, int side, Rat sign) {
        for (int v : by_pixel_[pixel]) {
          const Traversal& t = traversals_[v];
          int uses = (t.side_a == side ? 1 : 0) + (t.side_b == side ? 1 : 0);
          if (uses) terms.push_back({v, sign * uses});
        }
      };
      add_side(a, h, Rat(1));
      add_side(b, opposite_side(h), Rat(-1));
      lp_.add_row("edge" + std::to_string(a) + "_" + std::to_string(b), std::move(terms), '=', 0);
    }
}

int TransitionModel::var_of(int pixel, int side_a, int side_b) const {
  if (side_a > side_b) std::swap(side_a, side_b);
  for (int v : by_pixel_[pixel]) {
    const Traversal& t = traversals_[v];
    if (t.side_a == side_a && t.side_b == side_b) return v;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Decoding integral transition solutions into closed walks.
// ---------------------------------------------------------------------------

namespace {

struct PortRef {
  int instance = -1;  // traversal instance id
  int slot = 0;       // 0 = side_a port, 1 = side_b port
};

std::vector<Move> walk_moves_from_ports(const GridInstance& inst,
                                        const std::vector<TransitionModel::Traversal>& inst_types,
                                        const std::vector<std::array<PortRef, 2>>& port_partner,
                                        std::vector<char>& visited, int start) {
  // Follow the 2-regular pairing: traversal instances bind their two ports
  // internally; port_partner binds ports across grid edges.
  std::vector<Move> moves;
  int cur = start;
  int out_slot = 1;  // leave through side_b first
  while (!visited[cur]) {
    visited[cur] = 1;
    const auto& t = inst_types[cur];
    int side = out_slot == 0 ? t.side_a : t.side_b;
    Pixel from = inst.pixel(t.pixel);
    moves.push_back({from, static_cast<Heading>(side)});
    const PortRef& next = port_partner[cur][out_slot];
    // Entered the next traversal through `next.slot`; leave the other way.
    cur = next.instance;
    out_slot = next.slot == 0 ? 1 : 0;
  }
  return moves;
}

}  // namespace

DecodedWalks decode_transition_solution(const TransitionModel& model,
                                        const std::vector<long>& t_values) {
  const GridInstance& inst = model.instance();
  std::vector<TransitionModel::Traversal> inst_types;
  for (int v = 0; v < model.traversal_count(); ++v) {
    if (t_values[v] < 0) throw Error(Errc::ParamOutOfRange, "negative traversal count");
    for (long k = 0; k < t_values[v]; ++k) inst_types.push_back(model.traversal(v));
  }

  // Pair ports across each grid edge in first-in first-out order.
  std::vector<std::array<PortRef, 2>> port_partner(inst_types.size());
  std::map<std::pair<int, int>, std::vector<PortRef>> edge_queue;  // (pixel, side) -> ports
  for (std::size_t i = 0; i < inst_types.size(); ++i) {
    edge_queue[{inst_types[i].pixel, inst_types[i].side_a}].push_back(
        {static_cast<int>(i), 0});
    edge_queue[{inst_types[i].pixel, inst_types[i].side_b}].push_back(
        {static_cast<int>(i), 1});
  }
  for (auto& [key, ports] : edge_queue) {
    auto [pixel, side] = key;
    int nb = inst.neighbor(pixel, static_cast<Heading>(side));
    if (nb < 0) throw Error(Errc::InconsistentPath, "traversal into a missing neighbor");
    if (nb < pixel) continue;  // handled from the other side
    auto& other = edge_queue[{nb, opposite_side(side)}];
    if (other.size() != ports.size())
      throw Error(Errc::InconsistentPath, "edge balance violated in integral solution");
    for (std::size_t k = 0; k < ports.size(); ++k) {
      port_partner[ports[k].instance][ports[k].slot] = other[k];
      port_partner[other[k].instance][other[k].slot] = ports[k];
    }
  }

  DecodedWalks out;
  std::vector<char> visited(inst_types.size(), 0);
  for (std::size_t i = 0; i < inst_types.size(); ++i) {
    if (visited[i]) continue;
    out.walks.push_back(
        walk_moves_from_ports(inst, inst_types, port_partner, visited, static_cast<int>(i)));
  }

  // Weld walks that share a grid edge: crossing continuations can be
  // swapped freely, so such walks always join at zero extra cost.
  auto edge_key = [](const Move& m) {
    Pixel a = m.from, b = m.target();
    if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) std::swap(a, b);
    return std::make_pair(a, b);
  };
  auto find_crossing = [&](const std::vector<Move>& w, const Move& crossing) -> int {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] == crossing) return static_cast<int>(i);
    return -1;
  };
  bool welded = true;
  while (welded) {
    welded = false;
    for (std::size_t i = 0; i < out.walks.size() && !welded; ++i) {
      std::set<std::pair<Pixel, Pixel>> edges_i;
      for (const Move& m : out.walks[i]) edges_i.insert(edge_key(m));
      for (std::size_t j = i + 1; j < out.walks.size() && !welded; ++j) {
        for (const Move& m : out.walks[j]) {
          if (!edges_i.count(edge_key(m))) continue;
          // Align walk j to cross the shared edge in the same direction.
          std::vector<Move> wj = out.walks[j];
          Move crossing = m;
          int pos_i = find_crossing(out.walks[i], crossing);
          if (pos_i < 0) {
            // Walk i crosses the edge the other way; reverse j's crossing.
            std::vector<Move> rev;
            for (auto it = wj.rbegin(); it != wj.rend(); ++it)
              rev.push_back({it->target(), opposite(it->heading)});
            wj = std::move(rev);
            crossing = {crossing.target(), opposite(crossing.heading)};
            pos_i = find_crossing(out.walks[i], crossing);
          }
          int pos_j = find_crossing(wj, crossing);
          if (pos_i < 0 || pos_j < 0) continue;
          std::vector<Move> merged(out.walks[i].begin(), out.walks[i].begin() + pos_i + 1);
          for (std::size_t k = 1; k <= wj.size(); ++k)
            merged.push_back(wj[(pos_j + k) % wj.size()]);
          merged.insert(merged.end(), out.walks[i].begin() + pos_i + 1, out.walks[i].end());
          out.walks[i] = std::move(merged);
          out.walks.erase(out.walks.begin() + static_cast<long>(j));
          welded = true;
          break;
        }
      }
    }
  }

  std::sort(out.walks.begin(), out.walks.end(), [](const auto& a, const auto& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  out.super_component.resize(out.walks.size());
  std::iota(out.super_component.begin(), out.super_component.end(), 0);
  out.component_count = static_cast<int>(out.walks.size());
  return out;
}

// ---------------------------------------------------------------------------
// Separation.
// ---------------------------------------------------------------------------

namespace {

std::vector<char> covered_flags(const TransitionModel& model, const std::vector<long>& t) {
  std::vector<char> covered(model.instance().size(), 0);
  for (int v = 0; v < model.traversal_count(); ++v)
    if (t[v] > 0) covered[model.traversal(v).pixel] = 1;
  return covered;
}

Rat evaluate_cut(const TransitionCut& cut, const std::vector<Rat>& values) {
  Rat lhs(0);
  for (const auto& [var, coef] : cut.terms) lhs += coef * values[var];
  return lhs - cut.rhs;
}

}  // namespace

std::vector<TransitionCut> separate_simple_cut(const TransitionModel& model,
                                               const std::vector<long>& t) {
  const GridInstance& inst = model.instance();
  std::vector<char> covered = covered_flags(model, t);

  // Support components: covered pixels joined by used grid edges.
  std::vector<int> comp(inst.size(), -1);
  int ncomp = 0;
  for (int s = 0; s < inst.size(); ++s) {
    if (!covered[s] || comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      int j = stack.back();
      stack.pop_back();
      for (int v : model.vars_of(j)) {
        if (t[v] == 0) continue;
        for (int side : {model.traversal(v).side_a, model.traversal(v).side_b}) {
          int nb = inst.neighbor(j, static_cast<Heading>(side));
          if (nb >= 0 && covered[nb] && comp[nb] < 0) {
            comp[nb] = ncomp;
            stack.push_back(nb);
          }
        }
      }
    }
    ++ncomp;
  }
  if (ncomp <= 1) throw Error(Errc::NoViolation, "support is connected");

  auto lex_smallest_covered = [&](int component, bool inside) -> std::optional<int> {
    for (int j = 0; j < inst.size(); ++j)
      if (covered[j] && (comp[j] == component) == inside) {
        if (model.instance().variant() == CoverageVariant::Subset &&
            !inst.in_subset(inst.pixel(j)))
          continue;
        return j;
      }
    return std::nullopt;
  };

  std::vector<TransitionCut> cuts;
  for (int c = 0; c < ncomp; ++c) {
    auto a = lex_smallest_covered(c, true);
    auto b = lex_smallest_covered(c, false);
    if (!a || !b) continue;  // component without coverage witnesses

    TransitionCut cut;
    cut.family = 's';
    for (int j = 0; j < inst.size(); ++j) {
      if (comp[j] != c) continue;
      for (int v : model.vars_of(j)) {
        const auto& tr = model.traversal(v);
        int outside = 0;
        int na = inst.neighbor(j, static_cast<Heading>(tr.side_a));
        int nb = inst.neighbor(j, static_cast<Heading>(tr.side_b));
        if (comp[na] != c) ++outside;
        if (tr.side_b != tr.side_a && comp[nb] != c) ++outside;
        if (outside) cut.terms.push_back({v, Rat(outside)});
      }
    }
    if (model.has_coverage_vars()) {
      cut.terms.push_back({model.u_index(*a), Rat(-1)});
      cut.terms.push_back({model.u_index(*b), Rat(-1)});
      cut.rhs = -1;
    } else {
      cut.rhs = 1;
    }
    // Only emit violated cuts; by maximality of the component nothing
    // enters it, so the traversal part is zero.
    std::vector<Rat> values(model.base_lp().vars.size(), Rat(0));
    for (int v = 0; v < model.traversal_count(); ++v) values[v] = Rat(t[v]);
    if (model.has_coverage_vars())
      for (int j = 0; j < inst.size(); ++j) values[model.u_index(j)] = covered[j] ? 1 : 0;
    if (evaluate_cut(cut, values) < 0) cuts.push_back(std::move(cut));
  }
  if (cuts.empty()) throw Error(Errc::NoViolation, "no violated simple cut");
  return cuts;
}

namespace {

// Traversal multiset of one walk, as variable ids.
std::map<int, int> walk_traversals(const TransitionModel& model, const std::vector<Move>& walk) {
  const GridInstance& inst = model.instance();
  std::map<int, int> used;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const Move& in = walk[i];
    const Move& out = walk[(i + 1) % walk.size()];
    int pixel = *inst.index_of(in.target());
    int side_in = side_toward(inst, pixel, *inst.index_of(in.from));
    int side_out = static_cast<int>(out.heading);
    int var = model.var_of(pixel, side_in, side_out);
    if (var < 0) throw Error(Errc::InconsistentPath, "walk uses a missing traversal");
    used[var] += 1;
  }
  return used;
}

bool is_corner(const GridInstance& inst, int j) {
  std::vector<int> sides;
  for (int h = 0; h < kHeadingCount; ++h)
    if (inst.neighbor(j, static_cast<Heading>(h)) >= 0) sides.push_back(h);
  if (sides.size() <= 1) return true;
  if (sides.size() > 2) return false;
  return opposite_side(sides[0]) != sides[1];
}

}  // namespace

std::vector<TransitionCut> separate_advanced_cut(const TransitionModel& model,
                                                 const std::vector<long>& t) {
  const GridInstance& inst = model.instance();
  DecodedWalks decoded = decode_transition_solution(model, t);
  if (decoded.walks.size() <= 1)
    throw Error(Errc::NoViolation, "solution is a single closed walk");
  std::vector<char> covered = covered_flags(model, t);

  // Pixel sets per walk.
  std::vector<std::set<int>> walk_pixels;
  for (const auto& w : decoded.walks) {
    std::set<int> s;
    for (const Move& m : w) s.insert(*inst.index_of(m.from));
    walk_pixels.push_back(std::move(s));
  }

  std::vector<TransitionCut> cuts;
  for (std::size_t wi = 0; wi < decoded.walks.size(); ++wi) {
    // p_f: pixel covered only by this walk; corners first, then boundary.
    // Every feasible tour must pass p_f for the cut to bind, so subset
    // instances restrict the choice to subset pixels; penalty instances
    // condition the cut on p_f's coverage indicator instead.
    std::vector<int> candidates;
    for (int j : walk_pixels[wi]) {
      if (inst.variant() == CoverageVariant::Subset && !inst.in_subset(inst.pixel(j))) continue;
      bool exclusive = true;
      for (std::size_t wj = 0; wj < decoded.walks.size() && exclusive; ++wj)
        if (wj != wi && walk_pixels[wj].count(j)) exclusive = false;
      if (exclusive) candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      auto rank = [&](int j) {
        if (is_corner(inst, j)) return 0;
        return inst.degree(j) < 4 ? 1 : 2;
      };
      return rank(a) < rank(b);
    });
    if (candidates.empty()) continue;
    int p_f = candidates.front();

    // p_f': a pixel the tour must also visit, outside this walk.
    std::optional<int> p_f2;
    for (int j = 0; j < inst.size(); ++j) {
      if (walk_pixels[wi].count(j)) continue;
      switch (inst.variant()) {
        case CoverageVariant::Full:
          p_f2 = j;
          break;
        case CoverageVariant::Subset:
          if (inst.in_subset(inst.pixel(j))) p_f2 = j;
          break;
        case CoverageVariant::Penalty:
          if (covered[j]) p_f2 = j;
          break;
      }
      if (p_f2) break;
    }
    if (!p_f2) continue;

    std::map<int, int> used = walk_traversals(model, decoded.walks[wi]);

    TransitionCut cut;
    cut.family = 'a';
    // Term 1: unused traversals of p_f.
    for (int v : model.vars_of(p_f))
      if (t[v] == 0) cut.terms.push_back({v, Rat(1)});
    // Terms 2 and 3 over the walk's other pixels.
    for (int j : walk_pixels[wi]) {
      if (j == p_f) continue;
      bool straight_only = true;
      for (const auto& [var, count] : used)
        if (model.traversal(var).pixel == j && model.traversal(var).turns != 0)
          straight_only = false;
      if (straight_only) {
        // F_s: any simple turn here would connect the walk to a crossing.
        for (int v : model.vars_of(j))
          if (model.traversal(v).turns == 1) cut.terms.push_back({v, Rat(1)});
      } else {
        for (int v : model.vars_of(j))
          if (t[v] == 0 && model.traversal(v).turns != 2) cut.terms.push_back({v, Rat(1)});
      }
    }
    if (model.has_coverage_vars()) {
      // terms >= u_{p_f} + u_{p_f'} - 1: trivial whenever the tour skips
      // either pixel, the full-coverage argument otherwise.
      cut.terms.push_back({model.u_index(p_f), Rat(-1)});
      cut.terms.push_back({model.u_index(*p_f2), Rat(-1)});
      cut.rhs = -1;
    } else {
      cut.rhs = 1;
    }

    std::vector<Rat> values(model.base_lp().vars.size(), Rat(0));
    for (int v = 0; v < model.traversal_count(); ++v) values[v] = Rat(t[v]);
    if (model.has_coverage_vars())
      for (int j = 0; j < inst.size(); ++j) values[model.u_index(j)] = covered[j] ? 1 : 0;
    if (evaluate_cut(cut, values) < 0) cuts.push_back(std::move(cut));
  }
  if (cuts.empty()) throw Error(Errc::NoWitness, "no advanced separation witness");
  return cuts;
}

// ---------------------------------------------------------------------------
// Branch and cut for tours.
// ---------------------------------------------------------------------------

namespace {

struct BoundChange {
  int var;
  Rat lower;
  std::optional<Rat> upper;
};

struct SearchNode {
  long id = 0;
  int depth = 0;
  Rat bound = 0;
  std::vector<BoundChange> changes;
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    if (a.depth != b.depth) return a.depth < b.depth;  // deeper first
    return a.id > b.id;
  }
};

class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(
                     std::min(seconds, 1e9)))) {}
  void check() const {
    if (std::chrono::steady_clock::now() > end_)
      throw Error(Errc::TimeLimitExceeded, "solver time limit");
  }

 private:
  std::chrono::steady_clock::time_point end_;
};

bool is_integral(const Rat& v) { return v.get_den() == 1; }

std::string log_line(long node, const Rat& bound, const std::optional<Rat>& incumbent,
                     std::size_t cuts) {
  std::string line = "node " + std::to_string(node) + " bound " + rat_str(bound) + " incumbent " +
                     (incumbent ? rat_str(*incumbent) : std::string("-")) + " cuts " +
                     std::to_string(cuts);
  return line;
}

CycleCover cover_from_walks(const std::vector<std::vector<Move>>& walks) {
  CycleCover cover;
  for (const auto& w : walks) cover.cycles.push_back(cycle_from_moves(w));
  return cover;
}

// Tour candidate value of keeping exactly the given walks.
std::optional<ExactSolution> tour_candidate(const GridInstance& inst,
                                            const std::vector<std::vector<Move>>& walks) {
  CycleCover cover = cover_from_walks(walks);
  for (const Pixel& p : inst.required_pixels())
    if (!cover.covers(p)) return std::nullopt;
  if (cover.cycles.size() > 1) return std::nullopt;
  ExactSolution sol;
  sol.cover = std::move(cover);
  sol.cost = cover_cost(inst, sol.cover);
  sol.optimum = sol.cost.total;
  return sol;
}

}  // namespace

ExactSolution solve_exact_tour(const GridInstance& instance, const SolverLimits& limits,
                               ExactStats* stats, LpBackend backend) {
  if (instance.size() > limits.max_pixels)
    throw Error(Errc::SizeLimitExceeded,
                std::to_string(instance.size()) + " pixels exceeds the configured cap of " +
                    std::to_string(limits.max_pixels));
  Deadline deadline(limits.time_limit_seconds);

  for (int cap = 4; cap <= 16; cap *= 2) {
    TransitionModel model(instance, cap);
    ExactStats local;
    ExactStats* st = stats ? stats : &local;
    st->nodes = 0;
    st->simple_cuts = 0;
    st->advanced_cuts = 0;
    st->log.clear();
    st->cut_pool.clear();

    // Incumbent: the approximation tour, and for penalty instances the
    // empty tour that pays every penalty.
    std::optional<ExactSolution> incumbent;
    {
      ApproxResult warm = approx_tour(instance, backend);
      ExactSolution sol;
      sol.cover = std::move(warm.cover);
      sol.cost = warm.cost;
      sol.optimum = sol.cost.total;
      incumbent = std::move(sol);
      if (instance.variant() == CoverageVariant::Penalty) {
        ExactSolution empty;
        empty.cost = cover_cost(instance, empty.cover);
        empty.optimum = empty.cost.total;
        if (empty.optimum < incumbent->optimum) incumbent = std::move(empty);
      }
    }

    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open;
    long next_id = 0;
    open.push({next_id++, 0, Rat(0), {}});
    bool capped = false;

    while (!open.empty()) {
      deadline.check();
      SearchNode node = open.top();
      open.pop();
      if (incumbent && node.bound >= incumbent->optimum) continue;

      bool node_done = false;
      int resolve_guard = 0;
      while (!node_done) {
        deadline.check();
        if (++resolve_guard > 400)
          throw Error(Errc::NumericFailure, "cut separation failed to converge");

        LinearProgram lp = model.base_lp();
        for (const TransitionCut& cut : st->cut_pool)
          lp.add_row("cut", std::vector<std::pair<int, Rat>>(cut.terms), '>', cut.rhs);
        for (const BoundChange& ch : node.changes) {
          lp.vars[ch.var].lower = ch.lower;
          lp.vars[ch.var].upper = ch.upper;
        }

        LpSolution sol = solve_lp(lp, backend);
        ++st->nodes;
        if (sol.status != LpStatus::Optimal) break;  // infeasible node
        Rat bound = sol.objective + model.objective_offset();
        node.bound = bound;
        st->log.push_back(log_line(node.id, bound,
                                   incumbent ? std::optional<Rat>(incumbent->optimum)
                                             : std::nullopt,
                                   st->cut_pool.size()));
        if (incumbent && bound >= incumbent->optimum) break;

        // Most fractional variable, traversals before indicators.
        int frac_var = -1;
        Rat best_frac(0);
        for (std::size_t v = 0; v < sol.values.size(); ++v) {
          if (is_integral(sol.values[v])) continue;
          Rat floor_part = sol.values[v] - Rat(sol.values[v].get_num() / sol.values[v].get_den());
          Rat dist = floor_part <= Rat(1, 2) ? floor_part : 1 - floor_part;
          if (frac_var < 0 || dist > best_frac) {
            frac_var = static_cast<int>(v);
            best_frac = dist;
          }
        }
        if (frac_var >= 0) {
          Rat value = sol.values[frac_var];
          Rat floor = Rat(value.get_num() / value.get_den());
          SearchNode down{next_id++, node.depth + 1, bound, node.changes};
          down.changes.push_back({frac_var, lp.vars[frac_var].lower, floor});
          SearchNode up{next_id++, node.depth + 1, bound, node.changes};
          up.changes.push_back({frac_var, floor + 1, lp.vars[frac_var].upper});
          open.push(std::move(down));
          open.push(std::move(up));
          break;
        }

        // Integral: decode and either accept, cut, or branch structurally.
        std::vector<long> t(model.traversal_count());
        for (int v = 0; v < model.traversal_count(); ++v)
          t[v] = static_cast<long>(sol.values[v].get_num().get_si());
        for (int v = 0; v < model.traversal_count(); ++v)
          if (t[v] >= cap) capped = true;
        DecodedWalks decoded = decode_transition_solution(model, t);

        if (decoded.walks.size() <= 1) {
          auto cand = tour_candidate(instance, decoded.walks);
          if (!cand && decoded.walks.empty() &&
              instance.variant() == CoverageVariant::Penalty) {
            ExactSolution empty;
            empty.cost = cover_cost(instance, empty.cover);
            empty.optimum = empty.cost.total;
            cand = std::move(empty);
          }
          if (cand && (!incumbent || cand->optimum < incumbent->optimum))
            incumbent = std::move(cand);
          node_done = true;
          break;
        }

        // Candidate tours hiding inside the solution (a single walk that
        // already covers everything required).
        for (const auto& w : decoded.walks) {
          auto cand = tour_candidate(instance, {w});
          if (cand && (!incumbent || cand->optimum < incumbent->optimum))
            incumbent = std::move(*cand);
        }
        if (incumbent && bound >= incumbent->optimum) break;

        // Keep only cuts the current point actually violates; penalty
        // indicator values may fall short of the coverage the separators
        // assume when a penalty is zero.
        auto violated = [&](std::vector<TransitionCut> cand) {
          std::vector<TransitionCut> keep;
          for (auto& c : cand) {
            Rat lhs(0);
            for (const auto& [var, coef] : c.terms) lhs += coef * sol.values[var];
            if (lhs < c.rhs) keep.push_back(std::move(c));
          }
          return keep;
        };
        std::vector<TransitionCut> cuts;
        try {
          cuts = violated(separate_simple_cut(model, t));
          st->simple_cuts += static_cast<int>(cuts.size());
        } catch (const Error&) {
        }
        if (cuts.empty()) {
          try {
            cuts = violated(separate_advanced_cut(model, t));
            st->advanced_cuts += static_cast<int>(cuts.size());
          } catch (const Error&) {
          }
        }
        if (!cuts.empty()) {
          for (auto& c : cuts) st->cut_pool.push_back(std::move(c));
          continue;  // re-solve this node with the grown pool
        }

        // Neither family separates. Branch three ways on the smallest used
        // traversal whose value is not pinned yet ({<=k-1}, {==k},
        // {>=k+1} partition the integers). A fully pinned disconnected
        // point admits no re-pairing into a single walk (its walks are
        // pairwise edge-disjoint), so it prunes.
        int pick = -1;
        for (int v = 0; v < model.traversal_count() && pick < 0; ++v) {
          if (t[v] == 0) continue;
          if (lp.vars[v].lower == *lp.vars[v].upper) continue;
          pick = v;
        }
        if (pick < 0) {
          node_done = true;  // pinned and disconnected: infeasible for tours
          break;
        }
        Rat k(t[pick]);
        if (lp.vars[pick].lower < k) {
          SearchNode below{next_id++, node.depth + 1, bound, node.changes};
          below.changes.push_back({pick, lp.vars[pick].lower, k - 1});
          open.push(std::move(below));
        }
        if (*lp.vars[pick].upper > k) {
          SearchNode above{next_id++, node.depth + 1, bound, node.changes};
          above.changes.push_back({pick, k + 1, lp.vars[pick].upper});
          open.push(std::move(above));
        }
        SearchNode pin{next_id++, node.depth + 1, bound, node.changes};
        pin.changes.push_back({pick, k, k});
        open.push(std::move(pin));
        break;
      }
    }

    if (capped) continue;  // traversal cap bound the optimum; retry larger
    if (!incumbent) throw Error(Errc::Infeasible, "no tour found");
    return *incumbent;
  }
  throw Error(Errc::NumericFailure, "traversal cap escalation exhausted");
}

// ---------------------------------------------------------------------------
// Branch and bound on the strip LP for exact cycle covers.
// ---------------------------------------------------------------------------

namespace {

struct StripNode {
  long id = 0;
  int depth = 0;
  Rat bound = 0;
  std::vector<std::pair<int, int>> fixings;  // (variable, 0/1)
};

struct StripNodeOrder {
  bool operator()(const StripNode& a, const StripNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

}  // namespace

ExactSolution solve_exact_cycle_cover(const GridInstance& instance, const SolverLimits& limits,
                                      ExactStats* stats, LpBackend backend) {
  if (instance.size() > limits.max_pixels)
    throw Error(Errc::SizeLimitExceeded,
                std::to_string(instance.size()) + " pixels exceeds the configured cap of " +
                    std::to_string(limits.max_pixels));
  Deadline deadline(limits.time_limit_seconds);

  TransitionOracle oracle(instance);
  AtomicStripGraph asg = strips_from_grid(instance, oracle);
  if (instance.variant() == CoverageVariant::Penalty) {
    std::vector<Rat> penalties;
    for (const Pixel& p : instance.pixels()) penalties.push_back(instance.penalty(p));
    asg = penalty_to_full(asg, penalties);
  }
  CycleCoverLp cc = build_cc_lp(asg);

  ExactStats local;
  ExactStats* st = stats ? stats : &local;

  std::optional<ExactSolution> incumbent;
  {
    ApproxResult warm = approx_cycle_cover(instance, backend);
    ExactSolution sol;
    sol.cover = std::move(warm.cover);
    sol.cost = warm.cost;
    sol.optimum = sol.cost.total;
    incumbent = std::move(sol);
    if (instance.variant() == CoverageVariant::Penalty) {
      ExactSolution empty;
      empty.cost = cover_cost(instance, empty.cover);
      empty.optimum = empty.cost.total;
      if (empty.optimum < incumbent->optimum) incumbent = std::move(empty);
    }
  }

  std::priority_queue<StripNode, std::vector<StripNode>, StripNodeOrder> open;
  long next_id = 0;
  open.push({next_id++, 0, Rat(0), {}});

  while (!open.empty()) {
    deadline.check();
    StripNode node = open.top();
    open.pop();
    if (incumbent && node.bound >= incumbent->optimum) continue;

    LinearProgram lp = cc.lp;
    for (const auto& [var, value] : node.fixings) {
      lp.vars[var].lower = value;
      lp.vars[var].upper = Rat(value);
    }
    LpSolution sol = solve_lp(lp, backend);
    ++st->nodes;
    if (sol.status != LpStatus::Optimal) continue;
    st->log.push_back(log_line(node.id, sol.objective,
                               incumbent ? std::optional<Rat>(incumbent->optimum) : std::nullopt,
                               0));
    if (incumbent && sol.objective >= incumbent->optimum) continue;

    // Branch on fractional strip selections first, then edges.
    auto fractional = [&](int lo, int hi) {
      int pick = -1;
      Rat best(0);
      for (int v = lo; v < hi; ++v) {
        if (is_integral(sol.values[v])) continue;
        Rat frac = sol.values[v] - Rat(sol.values[v].get_num() / sol.values[v].get_den());
        Rat dist = frac <= Rat(1, 2) ? frac : 1 - frac;
        if (pick < 0 || dist > best) {
          pick = v;
          best = dist;
        }
      }
      return pick;
    };
    int branch_var = fractional(0, cc.y_count);
    if (branch_var < 0) branch_var = fractional(cc.y_count, static_cast<int>(sol.values.size()));
    if (branch_var >= 0) {
      for (int value : {0, 1}) {
        StripNode child{next_id++, node.depth + 1, sol.objective, node.fixings};
        child.fixings.push_back({branch_var, value});
        open.push(std::move(child));
      }
      continue;
    }

    // Integral: read the strip selection and matching, decode to cycles.
    std::vector<int> chosen(asg.owner_count(), -1);
    for (int o = 0; o < asg.owner_count(); ++o)
      for (int s = 0; s < asg.strips_of(o); ++s)
        if (sol.values[cc.y_index(asg.global_strip(o, s))] == 1) chosen[o] = s;
    Matching matching;
    bool decode_ok = true;
    for (int o = 0; o < asg.owner_count() && decode_ok; ++o)
      if (chosen[o] < 0) decode_ok = false;
    if (!decode_ok) continue;
    std::map<int, int> matchvertex;
    for (int o = 0; o < asg.owner_count(); ++o)
      for (int side = 0; side < 2; ++side)
        matchvertex[asg.endpoint(asg.global_strip(o, chosen[o]), side)] = 2 * o + side;
    for (int a = 0; a < asg.vertex_count(); ++a)
      for (int b = a + 1; b < asg.vertex_count(); ++b) {
        int x = cc.x_index(asg, a, b);
        if (sol.values[x] == 0) continue;
        auto ia = matchvertex.find(a);
        auto ib = matchvertex.find(b);
        if (ia == matchvertex.end() || ib == matchvertex.end())
          throw Error(Errc::InconsistentPath, "edge on unselected endpoint");
        matching.edges.push_back({std::min(ia->second, ib->second),
                                  std::max(ia->second, ib->second)});
        matching.weight += asg.cost(a, b);
      }
    std::sort(matching.edges.begin(), matching.edges.end());

    ExactSolution cand;
    cand.cover = extract_cycles(chosen, matching, asg, oracle);
    cand.cost = cover_cost(instance, cand.cover);
    cand.optimum = cand.cost.total;
    if (!incumbent || cand.optimum < incumbent->optimum) incumbent = std::move(cand);
  }

  if (!incumbent) throw Error(Errc::Infeasible, "no cycle cover found");
  return *incumbent;
}

// ---------------------------------------------------------------------------
// Brute force oracles: label-setting over (pixel, heading, covered-mask).
// ---------------------------------------------------------------------------

namespace {

struct MaskSearch {
  const GridInstance& inst;
  std::vector<int> required;        // pixel indices carrying mask bits
  std::vector<int> bit_of;          // per pixel index, -1 if unbitted

  explicit MaskSearch(const GridInstance& instance) : inst(instance) {
    std::vector<Pixel> req = instance.variant() == CoverageVariant::Subset
                                 ? instance.subset()
                                 : instance.pixels();
    bit_of.assign(instance.size(), -1);
    for (const Pixel& p : req) {
      bit_of[*instance.index_of(p)] = static_cast<int>(required.size());
      required.push_back(*instance.index_of(p));
    }
    if (required.size() > 12)
      throw Error(Errc::TooLarge, "brute force capped at 12 required pixels");
  }

  int nmasks() const { return 1 << required.size(); }
  // State: ((pixel * 4 + heading) * nmasks + mask) * 2 + moved.
  int state(int pixel, int heading, int mask, int moved) const {
    return ((pixel * kHeadingCount + heading) * nmasks() + mask) * 2 + moved;
  }

  struct Table {
    std::vector<Rat> dist;
    std::vector<int> parent;
  };

  Table run(int anchor_pixel, int anchor_heading) const {
    int nstates = inst.size() * kHeadingCount * nmasks() * 2;
    Table table;
    table.dist.assign(nstates, Rat(-1));
    table.parent.assign(nstates, -1);
    using Entry = std::pair<Rat, int>;
    auto cmp = [](const Entry& a, const Entry& b) {
      int c = ::cmp(a.first, b.first);
      if (c != 0) return c > 0;
      return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
    int start_mask = bit_of[anchor_pixel] >= 0 ? (1 << bit_of[anchor_pixel]) : 0;
    int start = state(anchor_pixel, anchor_heading, start_mask, 0);
    table.dist[start] = 0;
    queue.push({Rat(0), start});
    std::vector<char> done(nstates, 0);

    while (!queue.empty()) {
      auto [d, s] = queue.top();
      queue.pop();
      if (done[s]) continue;
      done[s] = 1;
      int moved = s % 2;
      int mask = (s / 2) % nmasks();
      int heading = (s / 2 / nmasks()) % kHeadingCount;
      int pixel = s / 2 / nmasks() / kHeadingCount;

      auto relax = [&](int to, const Rat& w) {
        Rat cand = table.dist[s] + w;
        if (table.dist[to] < 0 || cand < table.dist[to]) {
          table.dist[to] = cand;
          table.parent[to] = s;
          queue.push({cand, to});
        }
      };
      relax(state(pixel, (heading + 1) % 4, mask, moved), inst.tau());
      relax(state(pixel, (heading + 3) % 4, mask, moved), inst.tau());
      int nb = inst.neighbor(pixel, static_cast<Heading>(heading));
      if (nb >= 0) {
        int nmask = bit_of[nb] >= 0 ? mask | (1 << bit_of[nb]) : mask;
        relax(state(nb, heading, nmask, 1), inst.kappa());
      }
    }
    return table;
  }

  Cycle reconstruct(const Table& table, int final_state) const {
    std::vector<Configuration> configs;
    for (int s = final_state; s >= 0; s = table.parent[s]) {
      int heading = (s / 2 / nmasks()) % kHeadingCount;
      int pixel = s / 2 / nmasks() / kHeadingCount;
      configs.push_back({inst.pixel(pixel), static_cast<Heading>(heading)});
    }
    std::reverse(configs.begin(), configs.end());
    configs.pop_back();  // final state repeats the anchor configuration
    return Cycle::from_steps(std::move(configs));
  }
};

}  // namespace

ExactSolution brute_force_cycle_cover(const GridInstance& instance) {
  MaskSearch search(instance);
  int n = static_cast<int>(search.required.size());
  if (n == 0) {
    // Penalty instance may leave everything uncovered... but only the
    // subset variant can have zero required pixels here.
    ExactSolution sol;
    sol.cost = cover_cost(instance, sol.cover);
    sol.optimum = sol.cost.total;
    return sol;
  }

  // best_cycle[anchor][mask]: cheapest single cycle through the anchor
  // covering at least `mask` (superset-min over reachable masks).
  int nmasks = search.nmasks();
  std::vector<std::vector<Rat>> best_cycle(n, std::vector<Rat>(nmasks, Rat(-1)));
  for (int a = 0; a < n; ++a) {
    int anchor = search.required[a];
    std::vector<Rat> best(nmasks, Rat(-1));
    for (int h = 0; h < kHeadingCount; ++h) {
      MaskSearch::Table table = search.run(anchor, h);
      for (int mask = 0; mask < nmasks; ++mask) {
        const Rat& d = table.dist[search.state(anchor, h, mask, 1)];
        if (d >= 0 && (best[mask] < 0 || d < best[mask])) best[mask] = d;
      }
    }
    // Superset minimum.
    for (int bit = 0; bit < n; ++bit)
      for (int mask = nmasks - 1; mask >= 0; --mask)
        if (!(mask & (1 << bit))) {
          const Rat& with = best[mask | (1 << bit)];
          if (with >= 0 && (best[mask] < 0 || with < best[mask])) best[mask] = with;
        }
    best_cycle[a] = std::move(best);
  }

  // Partition DP over required masks.
  std::vector<Rat> dp(nmasks, Rat(-1));
  std::vector<int> dp_pick(nmasks, 0);
  dp[0] = 0;
  for (int mask = 1; mask < nmasks; ++mask) {
    int low = 0;
    while (!(mask & (1 << low))) ++low;
    for (int sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & (1 << low))) continue;
      const Rat& cycle = best_cycle[low][sub];
      const Rat& rest = dp[mask ^ sub];
      if (cycle < 0 || rest < 0) continue;
      Rat total = cycle + rest;
      if (dp[mask] < 0 || total < dp[mask]) {
        dp[mask] = total;
        dp_pick[mask] = sub;
      }
    }
  }

  // Choose the covered mask (fixed for full/subset, free for penalty).
  int best_mask = nmasks - 1;
  Rat best_total = dp[best_mask];
  if (instance.variant() == CoverageVariant::Penalty) {
    best_mask = -1;
    best_total = -1;
    for (int mask = 0; mask < nmasks; ++mask) {
      if (dp[mask] < 0) continue;
      Rat penalties(0);
      for (int b = 0; b < n; ++b)
        if (!(mask & (1 << b))) penalties += instance.penalty(instance.pixel(search.required[b]));
      Rat total = dp[mask] + penalties;
      if (best_total < 0 || total < best_total) {
        best_total = total;
        best_mask = mask;
      }
    }
  }
  if (best_total < 0) throw Error(Errc::Infeasible, "no cycle cover exists");

  // Reconstruct the chosen partition.
  ExactSolution sol;
  for (int mask = best_mask; mask;) {
    int sub = dp_pick[mask];
    int low = 0;
    while (!(sub & (1 << low))) ++low;
    int anchor = search.required[low];
    // Find the realizing (heading, covered mask) pair again.
    bool found = false;
    for (int h = 0; h < kHeadingCount && !found; ++h) {
      MaskSearch::Table table = search.run(anchor, h);
      for (int m = 0; m < nmasks && !found; ++m) {
        if ((m & sub) != sub) continue;
        int fin = search.state(anchor, h, m, 1);
        if (table.dist[fin] >= 0 && table.dist[fin] == best_cycle[low][sub]) {
          sol.cover.cycles.push_back(search.reconstruct(table, fin));
          found = true;
        }
      }
    }
    if (!found) throw Error(Errc::NumericFailure, "oracle reconstruction failed");
    mask ^= sub;
  }
  sol.cost = cover_cost(instance, sol.cover);
  sol.optimum = sol.cost.total;
  if (sol.optimum != best_total)
    throw Error(Errc::NumericFailure, "oracle cost mismatch");
  return sol;
}

ExactSolution brute_force_tour(const GridInstance& instance) {
  MaskSearch search(instance);
  int n = static_cast<int>(search.required.size());
  int nmasks = search.nmasks();

  std::optional<ExactSolution> best;
  if (instance.variant() == CoverageVariant::Penalty) {
    ExactSolution empty;
    empty.cost = cover_cost(instance, empty.cover);
    empty.optimum = empty.cost.total;
    best = std::move(empty);
  }

  if (n > 0) {
    // Anchor tours at the lexicographically smallest covered required
    // pixel; penalty tours scan every achievable final mask.
    for (int a = 0; a < n; ++a) {
      int anchor = search.required[a];
      for (int h = 0; h < kHeadingCount; ++h) {
        MaskSearch::Table table = search.run(anchor, h);
        auto consider = [&](int mask) {
          int fin = search.state(anchor, h, mask, 1);
          if (table.dist[fin] < 0) return;
          Rat penalties(0);
          if (instance.variant() == CoverageVariant::Penalty)
            for (int b = 0; b < n; ++b)
              if (!(mask & (1 << b)))
                penalties += instance.penalty(instance.pixel(search.required[b]));
          Rat total = table.dist[fin] + penalties;
          if (!best || total < best->optimum) {
            ExactSolution sol;
            sol.cover.cycles.push_back(search.reconstruct(table, fin));
            sol.cost = cover_cost(instance, sol.cover);
            sol.optimum = sol.cost.total;
            if (sol.optimum != total) throw Error(Errc::NumericFailure, "oracle cost mismatch");
            best = std::move(sol);
          }
        };
        if (instance.variant() == CoverageVariant::Penalty) {
          for (int mask = 0; mask < nmasks; ++mask) {
            // Anchor must be the smallest covered bit to avoid duplicates.
            if (!(mask & (1 << a))) continue;
            consider(mask);
          }
        } else {
          consider(nmasks - 1);
        }
      }
      if (instance.variant() != CoverageVariant::Penalty) break;  // one anchor suffices
    }
  }
  if (!best) throw Error(Errc::Infeasible, "no tour exists");
  return *best;
}

}  // namespace turnsolve
