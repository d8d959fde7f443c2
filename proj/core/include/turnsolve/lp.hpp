#pragma once

#include <vector>

#include "turnsolve/simplex.hpp"
#include "turnsolve/strips.hpp"

namespace turnsolve {

/// The semi-quadratic cycle cover LP on an atomic-strip graph:
///   minimize  sum cost(e) x_e
///   with      sum_{o in O_p} y_o = 1                per owner p
///             2 x_vv + sum_{e at v, e != vv} x_e = y_o   per strip o = vw,
///                                                        for v and for w
///             0 <= y, x <= 1
/// The y variables come first, then one x variable per unordered endpoint
/// pair including loops.
struct CycleCoverLp {
  LinearProgram lp;
  int y_count = 0;
  int x_count = 0;

  int y_index(int global_strip) const { return global_strip; }
  int x_index(const AtomicStripGraph& g, int a, int b) const {
    return y_count + static_cast<int>(g.pair_index(a, b));
  }
};

CycleCoverLp build_cc_lp(const AtomicStripGraph& asg);

/// LP values split back into strip-selection and edge components.
struct FractionalSolution {
  std::vector<Rat> y;        // per global strip
  std::vector<Rat> x;        // per unordered endpoint pair (pair_index order)
  Rat objective = 0;

  const Rat& edge(const AtomicStripGraph& g, int a, int b) const {
    return x[g.pair_index(a, b)];
  }
};

/// Solves the relaxation exactly. The objective is a lower bound on every
/// integral cycle cover of the same graph.
FractionalSolution solve_cc_lp(const CycleCoverLp& cc, LpBackend backend = LpBackend::Hybrid);

}  // namespace turnsolve
