#include "turnsolve/lp.hpp"

namespace turnsolve {

CycleCoverLp build_cc_lp(const AtomicStripGraph& g) {
  CycleCoverLp cc;
  const int vcount = g.vertex_count();
  cc.y_count = g.strip_count();
  cc.x_count = static_cast<int>(AtomicStripGraph::pair_count(vcount));

  for (int s = 0; s < cc.y_count; ++s) {
    int owner = g.strip_owner(s);
    StripVertex v = g.vertex(g.endpoint(s, 0));
    cc.lp.add_variable("y_o" + std::to_string(owner) + "_" + std::to_string(v.strip), Rat(0),
                       Rat(0), Rat(1));
  }
  for (int b = 0; b < vcount; ++b)
    for (int a = 0; a <= b; ++a)
      cc.lp.add_variable("x_" + g.vertex_name(a) + "_" + g.vertex_name(b), g.cost(a, b), Rat(0),
                         Rat(1));

  // One cover row per owner.
  for (int o = 0; o < g.owner_count(); ++o) {
    std::vector<std::pair<int, Rat>> terms;
    for (int s = 0; s < g.strips_of(o); ++s) terms.push_back({cc.y_index(g.global_strip(o, s)), Rat(1)});
    cc.lp.add_row("cover_o" + std::to_string(o), std::move(terms), '=', Rat(1));
  }

  // Two endpoint rows per strip; the loop edge counts double.
  for (int s = 0; s < g.strip_count(); ++s)
    for (int side = 0; side < 2; ++side) {
      int v = g.endpoint(s, side);
      std::vector<std::pair<int, Rat>> terms;
      terms.push_back({cc.x_index(g, v, v), Rat(2)});
      for (int u = 0; u < g.vertex_count(); ++u)
        if (u != v) terms.push_back({cc.x_index(g, v, u), Rat(1)});
      terms.push_back({cc.y_index(s), Rat(-1)});
      cc.lp.add_row("match_" + g.vertex_name(v), std::move(terms), '=', Rat(0));
    }

  return cc;
}

FractionalSolution solve_cc_lp(const CycleCoverLp& cc, LpBackend backend) {
  LpSolution sol = solve_lp(cc.lp, backend);
  if (sol.status != LpStatus::Optimal)
    throw Error(Errc::NumericFailure, "cycle cover LP is always feasible; solver disagreed");
  FractionalSolution out;
  out.objective = sol.objective;
  out.y.assign(sol.values.begin(), sol.values.begin() + cc.y_count);
  out.x.assign(sol.values.begin() + cc.y_count, sol.values.end());
  return out;
}

}  // namespace turnsolve
