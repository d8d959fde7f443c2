#include "turnsolve/strips.hpp"

#include <algorithm>

namespace turnsolve {

AtomicStripGraph AtomicStripGraph::make(std::vector<int> strips_per_owner) {
  AtomicStripGraph g;
  int next = 0;
  for (std::size_t o = 0; o < strips_per_owner.size(); ++o) {
    g.owner_first_strip_.push_back(next);
    for (int s = 0; s < strips_per_owner[o]; ++s) g.strip_owner_.push_back(static_cast<int>(o));
    next += strips_per_owner[o];
  }
  g.cost_.assign(pair_count(g.vertex_count()), Rat(0));
  g.via_.assign(pair_count(g.vertex_count()), ViaRecord{});
  return g;
}

int AtomicStripGraph::omega() const {
  int w = 0;
  for (int o = 0; o < owner_count(); ++o) w = std::max(w, strips_of(o));
  return w;
}

int AtomicStripGraph::strips_of(int owner) const {
  int next = owner + 1 < owner_count() ? owner_first_strip_[owner + 1] : strip_count();
  return next - owner_first_strip_[owner];
}

StripVertex AtomicStripGraph::vertex(int id) const {
  int gs = id / 2;
  int owner = strip_owner_[gs];
  return {owner, gs - owner_first_strip_[owner], id % 2};
}

std::string AtomicStripGraph::vertex_name(int id) const {
  StripVertex v = vertex(id);
  return "o" + std::to_string(v.owner) + "s" + std::to_string(v.strip) + (v.side ? "b" : "a");
}

void AtomicStripGraph::mark_aux(int owner, int real_owner) {
  if (static_cast<int>(aux_of_.size()) < owner_count()) aux_of_.resize(owner_count(), -1);
  aux_of_[owner] = real_owner;
}

namespace {

// Witness minimum for a loop or intra-strip entry: the cheapest pass
// through a strip of a different owner.
std::pair<Rat, ViaRecord> witness_minimum(const AtomicStripGraph& g, int a, int b) {
  int owner = g.vertex(a).owner;
  Rat best(-1);
  ViaRecord via{};
  for (int s = 0; s < g.strip_count(); ++s) {
    if (g.strip_owner(s) == owner) continue;
    int e0 = g.endpoint(s, 0);
    int e1 = g.endpoint(s, 1);
    for (int first = 0; first < 2; ++first) {
      int w1 = first ? e1 : e0;
      int w2 = first ? e0 : e1;
      Rat cand = g.cost(a, w1) + g.cost(w2, b);
      if (best < 0 || cand < best) {
        best = cand;
        via = {s, first};
      }
    }
  }
  if (best < 0)
    throw Error(Errc::NoLoopWitness,
                "no witness strip for " + g.vertex_name(a) + "; graph has a single owner");
  return {best, via};
}

}  // namespace

AtomicStripGraph strips_from_grid(const GridInstance& instance, const TransitionOracle& oracle) {
  // Owners are the points that must carry a strip selection: all pixels for
  // full/penalty coverage, only the marked pixels for subset coverage
  // (other pixels stay freely traversable inside the transition costs).
  std::vector<Pixel> owners = instance.variant() == CoverageVariant::Subset
                                  ? instance.subset()
                                  : instance.pixels();
  if (owners.empty()) throw Error(Errc::EmptyInstance, "no strip owners");

  int n = static_cast<int>(owners.size());
  AtomicStripGraph g = AtomicStripGraph::make(std::vector<int>(n, 2));

  // Strip 0 horizontal (sides West/East), strip 1 vertical (sides
  // South/North); a vertex's pose is its pixel plus its heading.
  std::vector<Configuration> configs(g.vertex_count());
  for (int o = 0; o < n; ++o) {
    configs[g.vertex_id(o, 0, 0)] = {owners[o], Heading::West};
    configs[g.vertex_id(o, 0, 1)] = {owners[o], Heading::East};
    configs[g.vertex_id(o, 1, 0)] = {owners[o], Heading::South};
    configs[g.vertex_id(o, 1, 1)] = {owners[o], Heading::North};
  }
  g.set_configs(configs);

  // Regular pairs: cheapest transition from pose(a) to the opposite heading
  // of pose(b), which is pose(sibling(b)).
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) {
      if (g.is_loop_like(a, b)) continue;
      g.set_cost(a, b, oracle.cost(configs[a], configs[g.sibling(b)]));
    }

  // Loop-like entries (loops and same-owner pairs) are genuine detours:
  // the cheapest transition containing at least one pixel move. On full
  // grids this equals the witness minimum through an adjacent owner's
  // strip; on subset instances the detour may run through strip-less
  // pixels, which have no witness.
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = a; b < g.vertex_count(); ++b) {
      if (!g.is_loop_like(a, b)) continue;
      g.set_cost(a, b, oracle.moved_cost(configs[a], configs[g.sibling(b)]));
    }
  return g;
}

AtomicStripGraph metric_close(AtomicStripGraph g) {
  const int vcount = g.vertex_count();
  bool single_owner = g.owner_count() < 2;
  if (single_owner) throw Error(Errc::NoLoopWitness, "metric closure needs two owners");

  for (int pass = 0; pass < 4 * vcount + 8; ++pass) {
    bool changed = false;

    // Relax regular pairs through every strip pass (both orientations).
    for (int a = 0; a < vcount; ++a)
      for (int b = a; b < vcount; ++b) {
        if (g.is_loop_like(a, b)) continue;
        Rat cur = g.cost(a, b);
        for (int s = 0; s < g.strip_count(); ++s) {
          int e0 = g.endpoint(s, 0);
          int e1 = g.endpoint(s, 1);
          Rat c0 = g.cost(a, e0) + g.cost(e1, b);
          if (c0 < cur) {
            cur = std::move(c0);
            g.set_via(a, b, {s, 0});
            changed = true;
          }
          Rat c1 = g.cost(a, e1) + g.cost(e0, b);
          if (c1 < cur) {
            cur = std::move(c1);
            g.set_via(a, b, {s, 1});
            changed = true;
          }
        }
        g.set_cost(a, b, std::move(cur));
      }

    // Refresh loops and same-owner entries as witness minima.
    for (int a = 0; a < vcount; ++a)
      for (int b = a; b < vcount; ++b) {
        if (!g.is_loop_like(a, b)) continue;
        auto [value, via] = witness_minimum(g, a, b);
        if (value < g.cost(a, b)) {
          g.set_cost(a, b, value);
          g.set_via(a, b, via);
          changed = true;
        }
      }

    if (!changed) return g;
  }
  throw Error(Errc::NumericFailure, "metric closure failed to reach a fixpoint");
}

std::vector<PseudoTriangleViolation> check_pseudo_triangle(const AtomicStripGraph& g) {
  std::vector<PseudoTriangleViolation> out;
  const int vcount = g.vertex_count();
  for (int a = 0; a < vcount; ++a)
    for (int b = a; b < vcount; ++b) {
      bool loop_like = g.is_loop_like(a, b);
      int exempt_owner = loop_like ? g.vertex(a).owner : -1;
      const Rat& cur = g.cost(a, b);
      for (int s = 0; s < g.strip_count(); ++s) {
        if (loop_like && g.strip_owner(s) == exempt_owner) continue;
        int e0 = g.endpoint(s, 0);
        int e1 = g.endpoint(s, 1);
        if (g.cost(a, e0) + g.cost(e1, b) < cur) out.push_back({a, b, s, 0});
        else if (g.cost(a, e1) + g.cost(e0, b) < cur) out.push_back({a, b, s, 1});
      }
    }
  return out;
}

AtomicStripGraph penalty_to_full(const AtomicStripGraph& base, const std::vector<Rat>& penalties) {
  const int real_owners = base.owner_count();
  if (static_cast<int>(penalties.size()) != real_owners)
    throw Error(Errc::ParamOutOfRange, "penalty vector size mismatch");
  for (const Rat& c : penalties)
    if (c < 0) throw Error(Errc::NegativePenalty, "negative penalty");

  std::vector<int> strips_per_owner;
  for (int o = 0; o < real_owners; ++o) strips_per_owner.push_back(base.strips_of(o));
  for (int o = 0; o < real_owners; ++o) {
    strips_per_owner.push_back(base.strips_of(o));  // aux 1 of owner o
    strips_per_owner.push_back(base.strips_of(o));  // aux 2 of owner o
  }
  AtomicStripGraph g = AtomicStripGraph::make(strips_per_owner);
  for (int o = 0; o < real_owners; ++o) {
    g.mark_aux(real_owners + 2 * o, o);
    g.mark_aux(real_owners + 2 * o + 1, o);
  }

  // Every aux vertex mirrors one endpoint of the canonical (first) strip of
  // its real owner; side s mirrors endpoint s.
  auto persona = [&](int vertex) -> int {
    StripVertex v = g.vertex(vertex);
    int real = g.aux_of(v.owner);
    if (real < 0) return vertex;  // identical ids for real vertices
    return base.vertex_id(real, 0, v.side);
  };
  auto gadget_of = [&](int vertex) -> int {  // real owner of the gadget, or -1
    return g.aux_of(g.vertex(vertex).owner);
  };

  // Mirror value: the base entry, except that opposite endpoints of one
  // strip continue into a co-located strip for free.
  auto mirror = [&](int u, int v) -> Rat {
    if (base.same_strip(u, v)) return Rat(0);
    return base.cost(u, v);
  };

  const int vcount = g.vertex_count();
  for (int a = 0; a < vcount; ++a)
    for (int b = a; b < vcount; ++b) {
      int ga = gadget_of(a);
      int gb = gadget_of(b);
      if (ga < 0 && gb < 0) {  // both real: copy, including vias
        g.set_cost(a, b, base.cost(a, b));
        g.set_via(a, b, base.via(a, b));
        continue;
      }
      Rat value = mirror(persona(a), persona(b));
      // Toll c(p)/2 per gadget endpoint; connections inside one gadget are
      // toll-free (they carry the zero escape cycle).
      if (!(ga >= 0 && ga == gb)) {
        if (ga >= 0) value += penalties[ga] / 2;
        if (gb >= 0) value += penalties[gb] / 2;
      }
      g.set_cost(a, b, std::move(value));
    }

  // Poses for realization: aux vertices sit on their persona.
  if (base.has_configs()) {
    std::vector<Configuration> configs(vcount);
    for (int v = 0; v < vcount; ++v) configs[v] = base.config(persona(v));
    g.set_configs(std::move(configs));
  }

  // The mirrored table is close to its fixpoint but gadget shortcuts do
  // cascade (a strip-0 pairing through the gadget costs exactly c(p), and
  // entries incident to the gadget can reach the strip through the owner's
  // other strips), so the generic closure finishes the job.
  return metric_close(std::move(g));
}

namespace {

std::vector<Configuration> realize_rec(const AtomicStripGraph& asg, const TransitionOracle& oracle,
                                       int a, int b, int depth) {
  const ViaRecord& via = asg.via(a, b);
  if (via.strip < 0 || depth > 4 * asg.vertex_count()) {
    // Direct realization; also the fallback should a via chain loop at
    // equal values. Direct paths never cost more than the table entry.
    // Loop-like entries between real owners realize as their moved
    // detour; gadget connections stay in place so escape cycles collapse.
    if (asg.is_loop_like(a, b) && !asg.is_aux(asg.vertex(a).owner) &&
        !asg.is_aux(asg.vertex(b).owner)) {
      auto moved = oracle.moved_route(asg.config(a), asg.config(asg.sibling(b)));
      return std::move(moved.path);
    }
    auto result = oracle.route(asg.config(a), asg.config(asg.sibling(b)));
    return std::move(result.path);
  }
  int w1 = asg.endpoint(via.strip, via.first_side);
  int w2 = asg.sibling(w1);
  // cost(a,b) was relaxed to cost(a,w1) + cost(w2,b): the first leg ends at
  // config(sibling(w1)) = config(w2), where the second leg begins.
  std::vector<Configuration> path = realize_rec(asg, oracle, a, w1, depth + 1);
  std::vector<Configuration> tail = realize_rec(asg, oracle, w2, b, depth + 1);
  if (!path.empty() && !tail.empty() && path.back() == tail.front()) path.pop_back();
  path.insert(path.end(), tail.begin(), tail.end());
  return path;
}

}  // namespace

std::vector<Configuration> realize_connection(const AtomicStripGraph& asg,
                                              const TransitionOracle& oracle, int a, int b) {
  if (!asg.has_configs())
    throw Error(Errc::InconsistentPath, "graph carries no realization anchors");
  return realize_rec(asg, oracle, a, b, 0);
}

}  // namespace turnsolve
