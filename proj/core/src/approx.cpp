#include "turnsolve/approx.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "turnsolve/strips.hpp"

namespace turnsolve {

std::vector<int> dominant_strips(const FractionalSolution& frac, const AtomicStripGraph& asg) {
  std::vector<int> chosen(asg.owner_count(), 0);
  for (int o = 0; o < asg.owner_count(); ++o) {
    int best = 0;
    for (int s = 1; s < asg.strips_of(o); ++s)
      if (frac.y[asg.global_strip(o, s)] > frac.y[asg.global_strip(o, best)]) best = s;
    chosen[o] = best;
  }
  return chosen;
}

CycleCover extract_cycles(const std::vector<int>& chosen, const Matching& matching,
                          const AtomicStripGraph& asg, const TransitionOracle& oracle) {
  const int owners = asg.owner_count();
  // Matching vertex 2o / 2o+1 = side 0 / 1 of owner o's chosen strip.
  std::vector<int> endpoint_of(2 * owners);
  std::map<int, int> matchvertex_of;
  for (int o = 0; o < owners; ++o)
    for (int side = 0; side < 2; ++side) {
      int e = asg.endpoint(asg.global_strip(o, chosen[o]), side);
      endpoint_of[2 * o + side] = e;
      matchvertex_of[e] = 2 * o + side;
    }
  std::vector<int> partner(2 * owners, -1);
  for (const auto& [u, v] : matching.edges) {
    partner[u] = v;
    partner[v] = u;
  }
  for (int v = 0; v < 2 * owners; ++v)
    if (partner[v] < 0) throw Error(Errc::NoPerfectMatching, "unmatched strip endpoint");

  CycleCover cover;
  std::vector<char> visited(2 * owners, 0);
  Rat realized_total(0), matching_total(0);
  for (int start = 0; start < 2 * owners; ++start) {
    if (visited[start]) continue;
    std::vector<Configuration> walk;
    int a = start;
    do {
      visited[a] = 1;
      int b = partner[a];
      visited[b] = 1;
      int ea = endpoint_of[a];
      int eb = endpoint_of[b];
      matching_total += asg.cost(ea, eb);
      std::vector<Configuration> leg = realize_connection(asg, oracle, ea, eb);
      if (leg.front() != asg.config(ea) || leg.back() != asg.config(asg.sibling(eb)))
        throw Error(Errc::InconsistentPath, "realized leg does not connect its endpoints");
      if (!walk.empty() && walk.back() == leg.front()) walk.pop_back();
      walk.insert(walk.end(), leg.begin(), leg.end());
      // Continue from the other side of b's strip.
      a = b ^ 1;
    } while (a != start);

    if (!walk.empty() && walk.front() == walk.back()) walk.pop_back();
    std::set<Pixel> pixels;
    for (const auto& c : walk) pixels.insert(c.pixel);
    if (pixels.size() < 2) continue;  // gadget escape/skip cycle: drop
    Cycle cycle = Cycle::from_steps(std::move(walk));
    realized_total +=
        Rat(cycle.length()) * oracle.instance().kappa() + Rat(cycle.simple_turns()) * oracle.instance().tau();
    cover.cycles.push_back(std::move(cycle));
  }
  if (realized_total > matching_total)
    throw Error(Errc::InconsistentPath, "realized cover costs more than its matching");
  return cover;
}

namespace {

AtomicStripGraph pipeline_graph(const GridInstance& instance, const TransitionOracle& oracle) {
  AtomicStripGraph asg = strips_from_grid(instance, oracle);
  if (instance.variant() != CoverageVariant::Penalty) return asg;
  // Owner order equals pixel order for penalty graphs.
  std::vector<Rat> penalties;
  for (const Pixel& p : instance.pixels()) penalties.push_back(instance.penalty(p));
  return penalty_to_full(asg, penalties);
}

}  // namespace

ApproxResult approx_cycle_cover(const GridInstance& instance, LpBackend backend) {
  TransitionOracle oracle(instance);
  AtomicStripGraph asg = pipeline_graph(instance, oracle);
  CycleCoverLp cc = build_cc_lp(asg);
  FractionalSolution frac = solve_cc_lp(cc, backend);
  std::vector<int> chosen = dominant_strips(frac, asg);

  WeightedGraph endpoints(2 * asg.owner_count());
  for (int u = 0; u < 2 * asg.owner_count(); ++u)
    for (int v = u + 1; v < 2 * asg.owner_count(); ++v) {
      int eu = asg.endpoint(asg.global_strip(u / 2, chosen[u / 2]), u % 2);
      int ev = asg.endpoint(asg.global_strip(v / 2, chosen[v / 2]), v % 2);
      endpoints.set_weight(u, v, asg.cost(eu, ev));
    }
  Matching matched = min_weight_perfect_matching(endpoints);

  ApproxResult result;
  result.cover = extract_cycles(chosen, matched, asg, oracle);
  result.cost = cover_cost(instance, result.cover);
  result.lp_lower_bound = frac.objective;
  result.guarantee = 2 * asg.omega();
  return result;
}

// ---------------------------------------------------------------------------
// Splicing machinery on move sequences.
// ---------------------------------------------------------------------------

namespace {

using MoveSeq = std::vector<Move>;

MoveSeq reversed_moves(const MoveSeq& m) {
  MoveSeq out;
  out.reserve(m.size());
  for (auto it = m.rbegin(); it != m.rend(); ++it) out.push_back({it->target(), opposite(it->heading)});
  return out;
}

MoveSeq rotated_moves(const MoveSeq& m, int first) {
  MoveSeq out;
  out.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(m[(first + i) % m.size()]);
  return out;
}

std::vector<int> arrivals_at(const MoveSeq& m, Pixel p) {
  std::vector<int> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i].target() == p) out.push_back(static_cast<int>(i));
  return out;
}

std::set<Pixel> move_pixels(const MoveSeq& m) {
  std::set<Pixel> out;
  for (const Move& mv : m) out.insert(mv.from);
  return out;
}

int turn_between(const Move& arrive, const Move& leave) {
  return turn_steps(arrive.heading, leave.heading);
}

struct SpliceResult {
  Rat delta;      // exact cost change
  MoveSeq merged;
};

// Merge at a shared pixel: A arrives at p via A[ia], B via B[jb]; the merged
// walk runs B's loop between them.
SpliceResult splice_shared(const MoveSeq& a, int ia, const MoveSeq& b, int jb, const Rat& tau) {
  const Move& a_in = a[ia];
  const Move& a_out = a[(ia + 1) % a.size()];
  const Move& b_in = b[jb];
  const Move& b_out = b[(jb + 1) % b.size()];
  int new_turns = turn_between(a_in, b_out) + turn_between(b_in, a_out);
  int old_turns = turn_between(a_in, a_out) + turn_between(b_in, b_out);
  SpliceResult res;
  res.delta = Rat(new_turns - old_turns) * tau;
  res.merged = rotated_moves(a, (ia + 1) % static_cast<int>(a.size()));
  MoveSeq bpart = rotated_moves(b, (jb + 1) % static_cast<int>(b.size()));
  res.merged.insert(res.merged.end(), bpart.begin(), bpart.end());
  return res;
}

// Merge two pixel-disjoint cycles through a doubled connection path.
SpliceResult splice_disjoint(const MoveSeq& a, int ia, const MoveSeq& b, int jb,
                             const std::vector<Configuration>& path, const Rat& path_cost,
                             const Rat& tau) {
  const Move& a_in = a[ia];
  const Move& a_out = a[(ia + 1) % a.size()];
  const Move& b_in = b[jb];
  const Move& b_out = b[(jb + 1) % b.size()];
  Heading h1 = path.front().heading;
  Heading h2 = path.back().heading;

  MoveSeq forth;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (path[i].pixel != path[i + 1].pixel) forth.push_back({path[i].pixel, path[i].heading});

  SpliceResult res;
  int junction_turns = turn_between(a_in, {a_in.target(), h1}) +
                       turn_between({path.back().pixel, h2}, b_out) +
                       turn_between(b_in, {b_in.target(), opposite(h2)}) +
                       turn_between({path.front().pixel, opposite(h1)}, a_out);
  int old_turns = turn_between(a_in, a_out) + turn_between(b_in, b_out);
  res.delta = 2 * path_cost + Rat(junction_turns - old_turns) * tau;

  res.merged = rotated_moves(a, (ia + 1) % static_cast<int>(a.size()));
  res.merged.insert(res.merged.end(), forth.begin(), forth.end());
  MoveSeq bpart = rotated_moves(b, (jb + 1) % static_cast<int>(b.size()));
  res.merged.insert(res.merged.end(), bpart.begin(), bpart.end());
  MoveSeq back = reversed_moves(forth);
  res.merged.insert(res.merged.end(), back.begin(), back.end());
  return res;
}

// Best merge of two cycles sharing at least one pixel.
std::optional<SpliceResult> best_shared_merge(const MoveSeq& a, const MoveSeq& b, const Rat& tau) {
  std::set<Pixel> pa = move_pixels(a);
  std::set<Pixel> pb = move_pixels(b);
  std::vector<Pixel> shared;
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(shared));
  if (shared.empty()) return std::nullopt;

  std::optional<SpliceResult> best;
  for (const MoveSeq& bb : {b, reversed_moves(b)})
    for (const Pixel& p : shared)
      for (int ia : arrivals_at(a, p))
        for (int jb : arrivals_at(bb, p)) {
          SpliceResult cand = splice_shared(a, ia, bb, jb, tau);
          if (!best || cand.delta < best->delta) best = std::move(cand);
        }
  return best;
}

// Cheapest orientation-free pixel pair between two cycles.
std::pair<Pixel, Pixel> closest_pixel_pair(const MoveSeq& a, const MoveSeq& b,
                                           const TransitionOracle& oracle) {
  std::optional<Rat> best;
  std::pair<Pixel, Pixel> pick;
  for (const Pixel& pa : move_pixels(a))
    for (const Pixel& pb : move_pixels(b)) {
      Rat c = oracle.orientation_free_cost(pa, pb);
      if (!best || c < *best) {
        best = c;
        pick = {pa, pb};
      }
    }
  return pick;
}

std::optional<SpliceResult> best_disjoint_merge(const MoveSeq& a, const MoveSeq& b,
                                                const TransitionOracle& oracle) {
  auto [pa, pb] = closest_pixel_pair(a, b, oracle);
  const Rat& tau = oracle.instance().tau();
  std::optional<SpliceResult> best;
  for (const MoveSeq& bb : {b, reversed_moves(b)})
    for (int ia : arrivals_at(a, pa))
      for (int jb : arrivals_at(bb, pb))
        for (int h1 = 0; h1 < kHeadingCount; ++h1)
          for (int h2 = 0; h2 < kHeadingCount; ++h2) {
            auto route = oracle.route({pa, static_cast<Heading>(h1)}, {pb, static_cast<Heading>(h2)});
            SpliceResult cand = splice_disjoint(a, ia, bb, jb, route.path, route.cost, tau);
            if (!best || cand.delta < best->delta) best = std::move(cand);
          }
  return best;
}

std::optional<SpliceResult> best_merge(const MoveSeq& a, const MoveSeq& b,
                                       const TransitionOracle& oracle) {
  if (auto shared = best_shared_merge(a, b, oracle.instance().tau())) return shared;
  return best_disjoint_merge(a, b, oracle);
}

std::vector<MoveSeq> cover_moves(const CycleCover& cover) {
  std::vector<MoveSeq> out;
  for (const Cycle& c : cover.cycles) out.push_back(cycle_moves(c));
  return out;
}

CycleCover cover_from_moves(const std::vector<MoveSeq>& seqs) {
  CycleCover out;
  for (const MoveSeq& m : seqs) out.cycles.push_back(cycle_from_moves(m));
  return out;
}

ApproxResult finish_tour(std::vector<MoveSeq> seqs, const GridInstance& instance,
                         Rat lp_lower_bound, Rat guarantee) {
  ApproxResult res;
  res.cover = cover_from_moves(seqs);
  res.cost = cover_cost(instance, res.cover);
  res.lp_lower_bound = std::move(lp_lower_bound);
  res.guarantee = std::move(guarantee);
  return res;
}

}  // namespace

CycleCover merge_intersecting_cycles(const CycleCover& cover, const GridInstance& instance) {
  std::vector<MoveSeq> seqs = cover_moves(cover);
  const Rat& tau = instance.tau();
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < seqs.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < seqs.size() && !merged; ++j) {
        auto shared = best_shared_merge(seqs[i], seqs[j], tau);
        if (!shared) continue;
        seqs[i] = std::move(shared->merged);
        seqs.erase(seqs.begin() + static_cast<long>(j));
        merged = true;
      }
  }
  return cover_from_moves(seqs);
}

ApproxResult connect_tour_full_grid(CycleCover cover, const GridInstance& instance,
                                    Rat lp_lower_bound) {
  TransitionOracle oracle(instance);
  std::vector<MoveSeq> seqs = cover_moves(merge_intersecting_cycles(cover, instance));
  // Greedy: always apply the globally cheapest merge.
  while (seqs.size() > 1) {
    std::size_t bi = 0, bj = 0;
    std::optional<SpliceResult> best;
    for (std::size_t i = 0; i < seqs.size(); ++i)
      for (std::size_t j = i + 1; j < seqs.size(); ++j) {
        auto cand = best_merge(seqs[i], seqs[j], oracle);
        if (cand && (!best || cand->delta < best->delta)) {
          best = std::move(cand);
          bi = i;
          bj = j;
        }
      }
    seqs[bi] = std::move(best->merged);
    seqs.erase(seqs.begin() + static_cast<long>(bj));
  }
  return finish_tour(std::move(seqs), instance, std::move(lp_lower_bound), Rat(6));
}

ApproxResult connect_tour_mst(CycleCover cover, const GridInstance& instance, Rat lp_lower_bound) {
  TransitionOracle oracle(instance);
  std::vector<MoveSeq> seqs = cover_moves(merge_intersecting_cycles(cover, instance));
  Rat guarantee = Rat(4) * 2 + 2;  // 4*omega + 2 with omega = 2
  if (seqs.size() <= 1)
    return finish_tour(std::move(seqs), instance, std::move(lp_lower_bound), guarantee);

  WeightedGraph cycle_graph(static_cast<int>(seqs.size()));
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t j = i + 1; j < seqs.size(); ++j) {
      auto [pa, pb] = closest_pixel_pair(seqs[i], seqs[j], oracle);
      cycle_graph.set_weight(static_cast<int>(i), static_cast<int>(j),
                             oracle.orientation_free_cost(pa, pb));
    }
  auto tree = minimum_spanning_tree(cycle_graph);

  // Union-find over original cycle ids; merge along tree edges in order.
  std::vector<int> where(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) where[i] = static_cast<int>(i);
  std::vector<std::optional<MoveSeq>> pool;
  for (auto& s : seqs) pool.push_back(std::move(s));
  for (const auto& [u, v] : tree) {
    int a = where[u], b = where[v];
    if (a == b) continue;
    auto merged = best_merge(*pool[a], *pool[b], oracle);
    pool[a] = std::move(merged->merged);
    pool[b].reset();
    for (auto& w : where)
      if (w == b) w = a;
  }
  std::vector<MoveSeq> out;
  for (auto& s : pool)
    if (s) out.push_back(std::move(*s));
  return finish_tour(std::move(out), instance, std::move(lp_lower_bound), guarantee);
}

ApproxResult connect_tour_pcst(CycleCover cover, const GridInstance& instance,
                               Rat lp_lower_bound) {
  TransitionOracle oracle(instance);
  std::vector<MoveSeq> seqs = cover_moves(merge_intersecting_cycles(cover, instance));
  Rat guarantee(12);
  if (seqs.size() <= 1)
    return finish_tour(std::move(seqs), instance, std::move(lp_lower_bound), guarantee);

  WeightedGraph cycle_graph(static_cast<int>(seqs.size()));
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t j = i + 1; j < seqs.size(); ++j) {
      auto [pa, pb] = closest_pixel_pair(seqs[i], seqs[j], oracle);
      cycle_graph.set_weight(static_cast<int>(i), static_cast<int>(j),
                             oracle.orientation_free_cost(pa, pb));
    }
  std::vector<Rat> prizes;
  for (const MoveSeq& s : seqs) {
    Rat prize(0);
    for (const Pixel& p : move_pixels(s)) prize += instance.penalty(p);
    prizes.push_back(prize);
  }
  PcstResult pcst = pcst_gw(cycle_graph, prizes);

  // Keep the spanned cycles, connect them along the doubled tree.
  std::vector<std::optional<MoveSeq>> pool(seqs.size());
  for (int v : pcst.spanned) pool[v] = std::move(seqs[v]);
  std::vector<int> where(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) where[i] = static_cast<int>(i);
  for (const auto& [u, v] : pcst.tree_edges) {
    int a = where[u], b = where[v];
    if (a == b) continue;
    auto merged = best_merge(*pool[a], *pool[b], oracle);
    pool[a] = std::move(merged->merged);
    pool[b].reset();
    for (auto& w : where)
      if (w == b) w = a;
  }
  std::vector<MoveSeq> out;
  for (auto& s : pool)
    if (s) out.push_back(std::move(*s));
  return finish_tour(std::move(out), instance, std::move(lp_lower_bound), guarantee);
}

ApproxResult approx_tour(const GridInstance& instance, LpBackend backend) {
  ApproxResult cover = approx_cycle_cover(instance, backend);
  switch (instance.variant()) {
    case CoverageVariant::Full:
      return connect_tour_full_grid(std::move(cover.cover), instance, cover.lp_lower_bound);
    case CoverageVariant::Subset:
      return connect_tour_mst(std::move(cover.cover), instance, cover.lp_lower_bound);
    case CoverageVariant::Penalty:
      return connect_tour_pcst(std::move(cover.cover), instance, cover.lp_lower_bound);
  }
  throw Error(Errc::ParamOutOfRange, "unknown variant");
}

}  // namespace turnsolve
