#pragma once

#include <string>
#include <vector>

#include "turnsolve/grid.hpp"
#include "turnsolve/transition.hpp"

namespace turnsolve {

/// Endpoint vertex of an atomic strip: (owner, strip within owner, side).
/// For grid strips the horizontal strip is id 0 with sides West/East and
/// the vertical strip is id 1 with sides South/North.
struct StripVertex {
  int owner = 0;
  int strip = 0;
  int side = 0;
};

/// How a cost entry is realized: directly (shortest configuration path
/// between endpoint poses) or through a witness strip pass.
struct ViaRecord {
  int strip = -1;       // global strip id, -1 = direct
  int first_side = 0;   // side of the witness strip the first leg targets
};

/// The weighted graph G_O on atomic-strip endpoints. Edge costs form a
/// total symmetric table including loops. Loop entries and the entry
/// between the two endpoints of one strip always carry witness-detour
/// values (a genuine trip through another owner's strip); direct values
/// there would describe degenerate single-point cycles.
class AtomicStripGraph {
 public:
  /// Uniform layout: `strips_per_owner[o]` strips for owner o, two
  /// endpoint vertices each. Costs start at zero.
  static AtomicStripGraph make(std::vector<int> strips_per_owner);

  int owner_count() const { return static_cast<int>(owner_first_strip_.size()); }
  int strip_count() const { return static_cast<int>(strip_owner_.size()); }
  int vertex_count() const { return 2 * strip_count(); }
  int omega() const;

  int strips_of(int owner) const;
  int global_strip(int owner, int strip) const { return owner_first_strip_[owner] + strip; }
  int strip_owner(int global_strip) const { return strip_owner_[global_strip]; }
  int vertex_id(int owner, int strip, int side) const {
    return 2 * global_strip(owner, strip) + side;
  }
  int endpoint(int global_strip, int side) const { return 2 * global_strip + side; }
  StripVertex vertex(int id) const;
  int strip_of_vertex(int id) const { return id / 2; }
  int sibling(int id) const { return id ^ 1; }
  std::string vertex_name(int id) const;

  const Rat& cost(int a, int b) const { return cost_[pair_index(a, b)]; }
  void set_cost(int a, int b, Rat value) { cost_[pair_index(a, b)] = std::move(value); }
  const ViaRecord& via(int a, int b) const { return via_[pair_index(a, b)]; }
  void set_via(int a, int b, ViaRecord v) { via_[pair_index(a, b)] = v; }

  bool same_strip(int a, int b) const { return a != b && strip_of_vertex(a) == strip_of_vertex(b); }
  /// Loops and every same-owner pair describe connections that never leave
  /// the owner; they carry witness-detour values instead of direct costs.
  bool is_loop_like(int a, int b) const {
    return a == b || vertex(a).owner == vertex(b).owner;
  }

  /// Grid/geometry realization anchor; empty for abstract tables.
  bool has_configs() const { return !configs_.empty(); }
  Configuration config(int vertex) const { return configs_[vertex]; }
  void set_configs(std::vector<Configuration> configs) { configs_ = std::move(configs); }

  /// Penalty-reduction bookkeeping: for auxiliary owners, the real owner
  /// they belong to; -1 for real owners.
  int aux_of(int owner) const { return owner < static_cast<int>(aux_of_.size()) ? aux_of_[owner] : -1; }
  bool is_aux(int owner) const { return aux_of(owner) >= 0; }
  void mark_aux(int owner, int real_owner);

  static std::size_t pair_count(int vertices) {
    return static_cast<std::size_t>(vertices) * (vertices + 1) / 2;
  }
  std::size_t pair_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    return static_cast<std::size_t>(b) * (b + 1) / 2 + a;
  }

 private:
  std::vector<int> owner_first_strip_;
  std::vector<int> strip_owner_;
  std::vector<Rat> cost_;
  std::vector<ViaRecord> via_;
  std::vector<Configuration> configs_;
  std::vector<int> aux_of_;
};

/// Builds the atomic-strip graph of a grid instance: two strips per pixel
/// (omega = 2), edge cost = cheapest transition from the first endpoint's
/// pose to the opposite heading of the second endpoint's pose. Loop and
/// intra-strip entries use witness detours through other owners. The
/// result already satisfies the pseudo-triangle inequalities.
AtomicStripGraph strips_from_grid(const GridInstance& instance, const TransitionOracle& oracle);

/// Relaxes all entries through strip passes until the pseudo-triangle
/// inequalities hold exactly; loop and intra-strip entries are refreshed
/// as witness minima over other owners. Never increases an entry;
/// idempotent. Throws Error(NoLoopWitness) when only one owner exists.
AtomicStripGraph metric_close(AtomicStripGraph asg);

struct PseudoTriangleViolation {
  int v1 = 0;
  int v2 = 0;
  int strip = 0;
  int first_side = 0;  // orientation of the cheaper witness split
};

/// All (v1, v2, strip) triples violating the pseudo-triangle inequality.
/// Loop and intra-strip left-hand sides exempt witness strips of their own
/// owner (those describe degenerate single-point cycles by convention).
std::vector<PseudoTriangleViolation> check_pseudo_triangle(const AtomicStripGraph& asg);

/// Reduces penalty coverage to full coverage: every real owner p gets two
/// auxiliary owners that can be matched to each other at zero cost (p is
/// covered elsewhere) or form a cycle through p of cost exactly c(p) (p is
/// skipped and the penalty paid). Aux endpoints mirror the endpoints of
/// p's first strip at a toll of c(p)/2 per incident connection.
AtomicStripGraph penalty_to_full(const AtomicStripGraph& asg, const std::vector<Rat>& penalties);

/// Expands a cost entry into its realized configuration walk from
/// config(a) to config(sibling(b)). Requires a graph with configs.
std::vector<Configuration> realize_connection(const AtomicStripGraph& asg,
                                              const TransitionOracle& oracle, int a, int b);

}  // namespace turnsolve
