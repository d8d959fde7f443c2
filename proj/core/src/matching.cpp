#include "turnsolve/matching.hpp"

#include <algorithm>
#include <tuple>

namespace turnsolve {

void WeightedGraph::set_weight(int u, int v, Rat w) {
  if (u == v) throw Error(Errc::ParamOutOfRange, "loops are not matching edges");
  if (w < 0) throw Error(Errc::ParamOutOfRange, "negative matching weight");
  weight_[idx(u, v)] = std::move(w);
  present_[idx(u, v)] = 1;
}

std::vector<std::tuple<int, int, Rat>> WeightedGraph::edges() const {
  std::vector<std::tuple<int, int, Rat>> out;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (present_[idx(u, v)]) out.push_back({u, v, weight_[idx(u, v)]});
  return out;
}

namespace {

// Maximum-weight matching on general graphs, primal-dual blossom method.
// Port of the reference algorithm by J. van Rantwijk (mwmatching); dual
// variables are exact rationals, so optimality is exact. Runs with the
// max-cardinality switch enabled, which is what perfect matching needs.
class BlossomSolver {
 public:
  BlossomSolver(int nvertex, const std::vector<std::tuple<int, int, Rat>>& edge_list)
      : nvertex_(nvertex), nedge_(static_cast<int>(edge_list.size())) {
    edges_ = edge_list;
    Rat maxweight(0);
    for (const auto& [i, j, w] : edges_)
      if (w > maxweight) maxweight = w;

    endpoint_.resize(2 * nedge_);
    for (int p = 0; p < 2 * nedge_; ++p)
      endpoint_[p] = p % 2 == 0 ? std::get<0>(edges_[p / 2]) : std::get<1>(edges_[p / 2]);

    neighbend_.assign(nvertex_, {});
    for (int k = 0; k < nedge_; ++k) {
      neighbend_[std::get<0>(edges_[k])].push_back(2 * k + 1);
      neighbend_[std::get<1>(edges_[k])].push_back(2 * k);
    }

    mate_.assign(nvertex_, -1);
    label_.assign(2 * nvertex_, 0);
    labelend_.assign(2 * nvertex_, -1);
    inblossom_.resize(nvertex_);
    for (int v = 0; v < nvertex_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * nvertex_, -1);
    blossomchilds_.assign(2 * nvertex_, {});
    blossombase_.resize(2 * nvertex_);
    for (int v = 0; v < nvertex_; ++v) blossombase_[v] = v;
    for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombase_[b] = -1;
    blossomendps_.assign(2 * nvertex_, {});
    bestedge_.assign(2 * nvertex_, -1);
    blossombestedges_.assign(2 * nvertex_, {});
    for (int b = nvertex_; b < 2 * nvertex_; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * nvertex_, Rat(0));
    for (int v = 0; v < nvertex_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(nedge_, 0);
  }

  // mate per vertex (-1 unmatched) after the run.
  std::vector<int> solve() {
    for (int t = 0; t < nvertex_; ++t) {
      label_.assign(2 * nvertex_, 0);
      bestedge_.assign(2 * nvertex_, -1);
      for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombestedges_[b].clear();
      allowedge_.assign(nedge_, 0);
      queue_.clear();

      for (int v = 0; v < nvertex_; ++v)
        if (mate_[v] < 0 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            int k = p / 2;
            int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;  // internal edge
            Rat kslack(0);
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = 1;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              int b = inblossom_[v];
              if (bestedge_[b] < 0 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] < 0 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // Dual adjustment.
        int deltatype = -1;
        Rat delta(0), deltaedge(0);
        int delta_edge = -1, delta_blossom = -1;

        for (int v = 0; v < nvertex_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] >= 0) {
            Rat d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              delta_edge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * nvertex_; ++b) {
          if (blossomparent_[b] < 0 && label_[b] == 1 && bestedge_[b] >= 0) {
            Rat d = slack(bestedge_[b]) / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              delta_edge = bestedge_[b];
            }
          }
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] < 0 && label_[b] == 2 &&
              (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            delta_blossom = b;
          }
        }
        if (deltatype == -1) {
          // Max-cardinality mode: no improving step exists; one final dual
          // update of max(0, min vertex dual) makes the optimum checkable.
          deltatype = 1;
          Rat mindual = dualvar_[0];
          for (int v = 1; v < nvertex_; ++v)
            if (dualvar_[v] < mindual) mindual = dualvar_[v];
          delta = mindual > 0 ? mindual : Rat(0);
        }

        for (int v = 0; v < nvertex_; ++v) {
          int lbl = label_[inblossom_[v]];
          if (lbl == 1)
            dualvar_[v] -= delta;
          else if (lbl == 2)
            dualvar_[v] += delta;
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] < 0) {
            if (label_[b] == 1)
              dualvar_[b] += delta;
            else if (label_[b] == 2)
              dualvar_[b] -= delta;
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[delta_edge] = 1;
          int i = std::get<0>(edges_[delta_edge]);
          if (label_[inblossom_[i]] == 0) i = std::get<1>(edges_[delta_edge]);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[delta_edge] = 1;
          queue_.push_back(std::get<0>(edges_[delta_edge]));
        } else if (deltatype == 4) {
          expand_blossom(delta_blossom, false);
        }
      }

      if (!augmented) break;

      for (int b = nvertex_; b < 2 * nvertex_; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
            dualvar_[b] == 0)
          expand_blossom(b, true);
    }

    std::vector<int> mate(nvertex_, -1);
    for (int v = 0; v < nvertex_; ++v)
      if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
    return mate;
  }

 private:
  Rat slack(int k) const {
    return dualvar_[std::get<0>(edges_[k])] + dualvar_[std::get<1>(edges_[k])] -
           2 * std::get<2>(edges_[k]);
  }

  void blossom_leaves(int b, std::vector<int>& out) const {
    if (b < nvertex_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[b]) blossom_leaves(t, out);
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      std::vector<int> leaves;
      blossom_leaves(b, leaves);
      queue_.insert(queue_.end(), leaves.begin(), leaves.end());
    } else if (t == 2) {
      int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] |= 4;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] &= ~4;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = std::get<0>(edges_[k]);
    int w = std::get<1>(edges_[k]);
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;

    std::vector<int> path, endps;
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }

    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;

    std::vector<int> leaves;
    blossom_leaves(b, leaves);
    for (int leaf : leaves) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }

    // Recompute best edges for the new blossom.
    std::vector<int> bestedgeto(2 * nvertex_, -1);
    for (int bv2 : path) {
      std::vector<std::vector<int>> nblists;
      if (!blossombestedges_[bv2].empty()) {
        nblists.push_back(blossombestedges_[bv2]);
      } else {
        std::vector<int> leaves2;
        blossom_leaves(bv2, leaves2);
        nblists.emplace_back();
        for (int leaf : leaves2)
          for (int p : neighbend_[leaf]) nblists.back().push_back(p / 2);
      }
      for (const auto& nblist : nblists)
        for (int k2 : nblist) {
          int i = std::get<0>(edges_[k2]);
          int j = std::get<1>(edges_[k2]);
          if (inblossom_[j] == b) std::swap(i, j);
          int bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 &&
              (bestedgeto[bj] == -1 || slack(k2) < slack(bestedgeto[bj])))
            bestedgeto[bj] = k2;
        }
      blossombestedges_[bv2].clear();
      bestedge_[bv2] = -1;
    }
    blossombestedges_[b].clear();
    for (int k2 : bestedgeto)
      if (k2 != -1) blossombestedges_[b].push_back(k2);
    bestedge_[b] = -1;
    for (int k2 : blossombestedges_[b])
      if (bestedge_[b] == -1 || slack(k2) < slack(bestedge_[b])) bestedge_[b] = k2;
  }

  void expand_blossom(int b, bool endstage) {
    for (int s : blossomchilds_[b]) {
      blossomparent_[s] = -1;
      if (s < nvertex_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        std::vector<int> leaves;
        blossom_leaves(s, leaves);
        for (int leaf : leaves) inblossom_[leaf] = s;
      }
    }

    if (!endstage && label_[b] == 2) {
      int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = index_of(blossomchilds_[b], entrychild);
      int jstep, endptrick;
      if (j & 1) {
        j -= static_cast<int>(blossomchilds_[b].size());
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        int idx = mod(j - endptrick, blossomchilds_[b].size());
        label_[endpoint_[blossomendps_[b][idx] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[blossomendps_[b][idx] / 2] = 1;
        j += jstep;
        idx = mod(j - endptrick, blossomchilds_[b].size());
        p = blossomendps_[b][idx] ^ endptrick;
        allowedge_[p / 2] = 1;
        j += jstep;
      }
      int bv = blossomchilds_[b][mod(j, blossomchilds_[b].size())];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (blossomchilds_[b][mod(j, blossomchilds_[b].size())] != entrychild) {
        bv = blossomchilds_[b][mod(j, blossomchilds_[b].size())];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        std::vector<int> leaves;
        blossom_leaves(bv, leaves);
        int v = 0;
        for (int leaf : leaves) {
          v = leaf;
          if (label_[leaf] != 0) break;
        }
        if (label_[v] != 0) {
          label_[v] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(v, 2, labelend_[v]);
        }
        j += jstep;
      }
    }

    label_[b] = -1;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);
    int i = index_of(blossomchilds_[b], t);
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= static_cast<int>(blossomchilds_[b].size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      int tt = blossomchilds_[b][mod(j, blossomchilds_[b].size())];
      int p = blossomendps_[b][mod(j - endptrick, blossomchilds_[b].size())] ^ endptrick;
      if (tt >= nvertex_) augment_blossom(tt, endpoint_[p]);
      j += jstep;
      tt = blossomchilds_[b][mod(j, blossomchilds_[b].size())];
      if (tt >= nvertex_) augment_blossom(tt, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i, blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i, blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
  }

  void augment_matching(int k) {
    for (int pass = 0; pass < 2; ++pass) {
      int s = pass == 0 ? std::get<0>(edges_[k]) : std::get<1>(edges_[k]);
      int p = pass == 0 ? 2 * k + 1 : 2 * k;
      // Trace back from s, swapping matched and unmatched edges.
      while (true) {
        int bs = inblossom_[s];
        if (bs >= nvertex_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;  // reached a single vertex
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        int next_s = endpoint_[labelend_[bt]];
        int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nvertex_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
        s = next_s;
      }
    }
  }

  static int index_of(const std::vector<int>& v, int x) {
    return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
  }
  static int mod(long long a, std::size_t m) {
    long long mm = static_cast<long long>(m);
    return static_cast<int>(((a % mm) + mm) % mm);
  }

  int nvertex_, nedge_;
  std::vector<std::tuple<int, int, Rat>> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_, labelend_, inblossom_, blossomparent_, blossombase_;
  std::vector<std::vector<int>> blossomchilds_, blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<Rat> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

Matching matching_from_mate(const WeightedGraph& g, const std::vector<int>& mate) {
  Matching m;
  for (int v = 0; v < g.size(); ++v) {
    int w = mate[v];
    if (w < 0) throw Error(Errc::NoPerfectMatching, "vertex left unmatched");
    if (v < w) {
      m.edges.push_back({v, w});
      m.weight += g.weight(v, w);
    }
  }
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

Matching solve_min_perfect(const WeightedGraph& g) {
  if (g.size() == 0) return {};
  // Transform to a maximization problem; max-cardinality matching of
  // maximum transformed weight is a minimum-weight perfect matching.
  Rat maxw(0);
  auto edge_list = g.edges();
  if (edge_list.empty()) throw Error(Errc::NoPerfectMatching, "graph has no edges");
  for (const auto& [u, v, w] : edge_list)
    if (w > maxw) maxw = w;
  std::vector<std::tuple<int, int, Rat>> transformed;
  transformed.reserve(edge_list.size());
  for (const auto& [u, v, w] : edge_list) transformed.push_back({u, v, maxw + 1 - w});
  BlossomSolver solver(g.size(), transformed);
  return matching_from_mate(g, solver.solve());
}

// Lexicographically smallest optimal edge set: fix the pairing of the
// smallest free vertex, cheapest-feasible partner first, re-solving the
// remainder to confirm optimality.
Matching lex_refine(const WeightedGraph& g, const Rat& optimum) {
  int n = g.size();
  std::vector<char> used(n, 0);
  Matching result;
  Rat fixed(0);

  auto sub_solve = [&](int skip_u, int skip_v) -> std::optional<Rat> {
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
      if (!used[v] && v != skip_u && v != skip_v) keep.push_back(v);
    if (keep.empty()) return Rat(0);
    WeightedGraph sub(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = i + 1; j < keep.size(); ++j)
        if (g.has_edge(keep[i], keep[j]))
          sub.set_weight(static_cast<int>(i), static_cast<int>(j), g.weight(keep[i], keep[j]));
    try {
      return solve_min_perfect(sub).weight;
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  for (int round = 0; round < n / 2; ++round) {
    int u = 0;
    while (used[u]) ++u;
    bool fixed_pair = false;
    for (int v = u + 1; v < n && !fixed_pair; ++v) {
      if (used[v] || !g.has_edge(u, v)) continue;
      auto rest = sub_solve(u, v);
      if (rest && fixed + g.weight(u, v) + *rest == optimum) {
        used[u] = used[v] = 1;
        fixed += g.weight(u, v);
        result.edges.push_back({u, v});
        fixed_pair = true;
      }
    }
    if (!fixed_pair) throw Error(Errc::NoPerfectMatching, "refinement lost feasibility");
  }
  result.weight = fixed;
  return result;
}

}  // namespace

Matching min_weight_perfect_matching(const WeightedGraph& g, MatchingOptions options) {
  if (g.size() % 2 != 0)
    throw Error(Errc::OddVertexCount, std::to_string(g.size()) + " vertices");
  Matching m = solve_min_perfect(g);
  if (g.size() <= options.lex_refine_limit && g.size() > 2) return lex_refine(g, m.weight);
  return m;
}

Matching brute_force_matching(const WeightedGraph& g) {
  if (g.size() % 2 != 0)
    throw Error(Errc::OddVertexCount, std::to_string(g.size()) + " vertices");
  if (g.size() > 14) throw Error(Errc::TooLarge, "brute force capped at 14 vertices");
  if (g.size() == 0) return {};

  int n = g.size();
  std::vector<char> used(n, 0);
  std::vector<std::pair<int, int>> current;
  std::optional<Matching> best;

  auto consider = [&](const Rat& weight) {
    Matching cand;
    cand.edges = current;
    cand.weight = weight;
    if (!best || cand.weight < best->weight ||
        (cand.weight == best->weight && cand.edges < best->edges))
      best = std::move(cand);
  };

  auto rec = [&](auto&& self, Rat acc) -> void {
    if (best && acc > best->weight) return;  // weights are nonnegative
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!used[v]) {
        u = v;
        break;
      }
    if (u < 0) {
      consider(acc);
      return;
    }
    used[u] = 1;
    for (int v = u + 1; v < n; ++v) {
      if (used[v] || !g.has_edge(u, v)) continue;
      used[v] = 1;
      current.push_back({u, v});
      self(self, acc + g.weight(u, v));
      current.pop_back();
      used[v] = 0;
    }
    used[u] = 0;
  };
  rec(rec, Rat(0));

  if (!best) throw Error(Errc::NoPerfectMatching, "no perfect matching exists");
  return *best;
}

}  // namespace turnsolve
