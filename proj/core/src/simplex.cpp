#include "turnsolve/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace turnsolve {

int LinearProgram::add_variable(std::string name, Rat objective, Rat lower,
                                std::optional<Rat> upper) {
  vars.push_back({std::move(name), std::move(objective), std::move(lower), std::move(upper)});
  return static_cast<int>(vars.size()) - 1;
}

void LinearProgram::add_row(std::string name, std::vector<std::pair<int, Rat>> terms, char sense,
                            Rat rhs) {
  rows.push_back({std::move(name), std::move(terms), sense, std::move(rhs)});
}

namespace {

// ---------------------------------------------------------------------------
// Internal representation: equality rows only. Inequalities get slack
// columns; artificial columns (one per row) sit at the end and are fixed to
// zero outside of phase 1. Both number backends share this layout so a basis
// can be handed from the floating engine to the exact one.
// ---------------------------------------------------------------------------

struct Internal {
  int m = 0;        // rows
  int n_user = 0;   // original variables
  int n_struct = 0; // user + slack
  int n_total = 0;  // + artificials
  std::vector<std::vector<std::pair<int, Rat>>> cols;  // all n_total columns
  std::vector<Rat> cost;                               // phase-2 objective
  std::vector<Rat> rhs;
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
};

Internal build_internal(const LinearProgram& lp) {
  Internal in;
  in.m = static_cast<int>(lp.rows.size());
  in.n_user = static_cast<int>(lp.vars.size());

  for (const auto& v : lp.vars) {
    in.cols.emplace_back();
    in.cost.push_back(v.objective);
    in.lower.push_back(v.lower);
    in.upper.push_back(v.upper);
  }
  for (int r = 0; r < in.m; ++r)
    for (const auto& [j, a] : lp.rows[r].terms)
      if (a != 0) in.cols[j].push_back({r, a});

  for (int r = 0; r < in.m; ++r) {
    const auto& row = lp.rows[r];
    if (row.sense == '=') continue;
    int s = static_cast<int>(in.cols.size());
    in.cols.emplace_back();
    in.cols[s].push_back({r, row.sense == '<' ? Rat(1) : Rat(-1)});
    in.cost.push_back(0);
    in.lower.push_back(0);
    in.upper.push_back(std::nullopt);
  }
  in.n_struct = static_cast<int>(in.cols.size());
  in.rhs.reserve(in.m);
  for (const auto& row : lp.rows) in.rhs.push_back(row.rhs);

  // Artificial columns; sign matches the phase-1 residual so the initial
  // artificial value is nonnegative. The sign is finalized per solve since
  // it depends on the nonbasic starting point, so use +1 here and flip in
  // the engines if needed: we instead store them with +1 and let engines
  // choose the residual sign through the basis value directly.
  for (int r = 0; r < in.m; ++r) {
    in.cols.emplace_back();
    in.cols.back().push_back({r, Rat(1)});
    in.cost.push_back(0);
    in.lower.push_back(0);
    in.upper.push_back(Rat(0));  // fixed to zero outside phase 1
  }
  in.n_total = static_cast<int>(in.cols.size());
  return in;
}

enum VarStatus : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

struct Basis {
  std::vector<int> basic;                 // size m, column index per row
  std::vector<unsigned char> status;      // size n_total
};

// ---------------------------------------------------------------------------
// Number adapters.
// ---------------------------------------------------------------------------

template <typename Num>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr double eps() { return 1e-9; }
  static double from_rat(const Rat& r) { return r.get_d(); }
  static bool is_zero(double v) { return std::abs(v) <= eps(); }
  static bool is_neg(double v) { return v < -eps(); }
  static bool is_pos(double v) { return v > eps(); }
};

template <>
struct NumTraits<Rat> {
  static const Rat& from_rat(const Rat& r) { return r; }
  static bool is_zero(const Rat& v) { return v == 0; }
  static bool is_neg(const Rat& v) { return v < 0; }
  static bool is_pos(const Rat& v) { return v > 0; }
};

// ---------------------------------------------------------------------------
// Dense revised simplex over Num, bounded variables, two phases.
// ---------------------------------------------------------------------------

template <typename Num>
class DenseSimplex {
 public:
  explicit DenseSimplex(const Internal& in) : in_(in), m_(in.m) {
    cols_.resize(in.n_total);
    for (int j = 0; j < in.n_total; ++j)
      for (const auto& [r, a] : in.cols[j]) cols_[j].push_back({r, NumTraits<Num>::from_rat(a)});
    rhs_.reserve(m_);
    for (const auto& b : in.rhs) rhs_.push_back(NumTraits<Num>::from_rat(b));
    lower_.reserve(in.n_total);
    for (const auto& l : in.lower) lower_.push_back(NumTraits<Num>::from_rat(l));
    upper_.resize(in.n_total);
    for (int j = 0; j < in.n_total; ++j)
      if (in.upper[j]) upper_[j] = NumTraits<Num>::from_rat(*in.upper[j]);
    cost_.reserve(in.n_total);
    for (const auto& c : in.cost) cost_.push_back(NumTraits<Num>::from_rat(c));
  }

  LpStatus run(Basis& out_basis) {
    init_artificial_basis();
    // Phase 1: minimize the sum of artificial values. The artificials are
    // nonnegative variables regardless of their column's sign, so they all
    // carry cost one.
    std::vector<Num> phase1_cost(in_.n_total, Num(0));
    for (int j = in_.n_struct; j < in_.n_total; ++j) phase1_cost[j] = Num(1);
    active_cost_ = &phase1_cost;
    phase1_ = true;
    LpStatus s = iterate();
    if (s != LpStatus::Optimal) return LpStatus::Infeasible;
    Num art_total(0);
    for (int r = 0; r < m_; ++r)
      if (basic_[r] >= in_.n_struct) art_total += x_basic_[r];
    if (NumTraits<Num>::is_pos(art_total)) return LpStatus::Infeasible;

    // Phase 2 with artificials clamped to zero.
    phase1_ = false;
    active_cost_ = &cost_;
    s = iterate();
    out_basis.basic = basic_;
    out_basis.status = status_;
    return s;
  }

  // Values for all columns given the final engine state.
  std::vector<Num> values() const {
    std::vector<Num> x(in_.n_total, Num(0));
    for (int j = 0; j < in_.n_total; ++j)
      x[j] = status_[j] == kAtUpper ? *upper_[j] : lower_[j];
    for (int r = 0; r < m_; ++r) x[basic_[r]] = x_basic_[r];
    return x;
  }

 private:
  void init_artificial_basis() {
    basic_.resize(m_);
    status_.assign(in_.n_total, kAtLower);
    binv_.assign(static_cast<std::size_t>(m_) * m_, Num(0));
    art_sign_.assign(m_, Num(1));

    // All structural variables nonbasic at lower bound; artificials basic.
    std::vector<Num> residual = rhs_;
    for (int j = 0; j < in_.n_struct; ++j) {
      if (NumTraits<Num>::is_zero(lower_[j])) continue;
      for (const auto& [r, a] : cols_[j]) residual[r] -= a * lower_[j];
    }
    x_basic_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      int art = in_.n_struct + r;
      basic_[r] = art;
      status_[art] = kBasic;
      if (NumTraits<Num>::is_neg(residual[r])) {
        art_sign_[r] = Num(-1);
        x_basic_[r] = -residual[r];
        // Flip the artificial column to keep the basis matrix invertible
        // with a positive variable.
        cols_[art][0].second = Num(-1);
        binv_[static_cast<std::size_t>(r) * m_ + r] = Num(-1);
      } else {
        x_basic_[r] = residual[r];
        binv_[static_cast<std::size_t>(r) * m_ + r] = Num(1);
      }
    }
  }

  bool fixed_var(int j) const {
    if (phase1_) {
      if (j >= in_.n_struct) return false;  // artificials move in phase 1
      return upper_[j] && *upper_[j] == lower_[j];
    }
    if (j >= in_.n_struct) return true;  // artificials pinned in phase 2
    return upper_[j] && *upper_[j] == lower_[j];
  }

  // Effective upper bound; artificials are unbounded above while phase 1
  // drives them down, and pinned to zero afterwards.
  const std::optional<Num>& ub(int j) const {
    static const std::optional<Num> none;
    if (phase1_ && j >= in_.n_struct) return none;
    return upper_[j];
  }

  Num reduced_cost(int j, const std::vector<Num>& pi) const {
    Num d = (*active_cost_)[j];
    for (const auto& [r, a] : cols_[j]) d -= pi[r] * a;
    return d;
  }

  LpStatus iterate() {
    const long max_iter = 200L * (in_.n_total + m_) + 5000;
    long bland_after = 0;
    bool bland = false;
    long stall = 0;
    Num last_obj = objective_value();

    for (long iter = 0; iter < max_iter; ++iter) {
      // pi = c_B * Binv
      std::vector<Num> pi(m_, Num(0));
      for (int r = 0; r < m_; ++r) {
        const Num& cb = (*active_cost_)[basic_[r]];
        if (NumTraits<Num>::is_zero(cb)) continue;
        const Num* row = &binv_[static_cast<std::size_t>(r) * m_];
        for (int k = 0; k < m_; ++k)
          if (!NumTraits<Num>::is_zero(row[k])) pi[k] += cb * row[k];
      }

      int entering = -1;
      int direction = 0;  // +1 increase, -1 decrease
      Num best_violation(0);
      for (int j = 0; j < in_.n_total; ++j) {
        if (status_[j] == kBasic || fixed_var(j)) continue;
        if (phase1_ && j >= in_.n_struct) {
          // Never re-enter artificials in phase 1.
          continue;
        }
        Num d = reduced_cost(j, pi);
        if (status_[j] == kAtLower && NumTraits<Num>::is_neg(d)) {
          Num v = -d;
          if (bland) {
            entering = j;
            direction = 1;
            break;
          }
          if (entering < 0 || v > best_violation) {
            entering = j;
            direction = 1;
            best_violation = v;
          }
        } else if (status_[j] == kAtUpper && NumTraits<Num>::is_pos(d)) {
          if (bland) {
            entering = j;
            direction = -1;
            break;
          }
          if (entering < 0 || d > best_violation) {
            entering = j;
            direction = -1;
            best_violation = d;
          }
        }
      }
      if (entering < 0) return LpStatus::Optimal;

      // w = Binv * A_j
      std::vector<Num> w(m_, Num(0));
      for (const auto& [r, a] : cols_[entering])
        for (int k = 0; k < m_; ++k) {
          const Num& bk = binv_[static_cast<std::size_t>(k) * m_ + r];
          if (!NumTraits<Num>::is_zero(bk)) w[k] += a * bk;
        }

      // Bounded ratio test; basic value change is -direction * t * w.
      bool limited = false;
      Num best_t(0);
      int leave_row = -1;
      int leave_to = kAtLower;
      if (ub(entering)) {
        best_t = *ub(entering) - lower_[entering];
        limited = true;
        leave_row = -2;  // bound flip
      }
      for (int r = 0; r < m_; ++r) {
        Num delta = direction > 0 ? -w[r] : w[r];
        if (NumTraits<Num>::is_pos(delta)) {
          if (!ub(basic_[r])) continue;
          Num t = (*ub(basic_[r]) - x_basic_[r]) / delta;
          if (!limited || t < best_t ||
              (t == best_t && leave_row >= 0 && basic_[r] < basic_[leave_row])) {
            limited = true;
            best_t = t;
            leave_row = r;
            leave_to = kAtUpper;
          }
        } else if (NumTraits<Num>::is_neg(delta)) {
          Num t = (lower_[basic_[r]] - x_basic_[r]) / delta;
          if (!limited || t < best_t ||
              (t == best_t && leave_row >= 0 && basic_[r] < basic_[leave_row])) {
            limited = true;
            best_t = t;
            leave_row = r;
            leave_to = kAtLower;
          }
        }
      }
      if (!limited) return LpStatus::Unbounded;
      if (best_t < 0) best_t = 0;

      // Apply the step.
      for (int r = 0; r < m_; ++r) {
        Num delta = direction > 0 ? -w[r] : w[r];
        if (!NumTraits<Num>::is_zero(delta)) x_basic_[r] += delta * best_t;
      }

      if (leave_row == -2) {
        status_[entering] = status_[entering] == kAtLower ? kAtUpper : kAtLower;
      } else {
        int leaving = basic_[leave_row];
        status_[leaving] = static_cast<unsigned char>(leave_to);
        status_[entering] = kBasic;
        basic_[leave_row] = entering;
        Num enter_value =
            (status2value(entering, direction) + (direction > 0 ? best_t : -best_t));
        x_basic_[leave_row] = enter_value;
        pivot_binv(leave_row, w);
      }

      // Anti-cycling: switch to Bland's rule after a run of stalls.
      Num obj = objective_value();
      if (obj < last_obj) {
        stall = 0;
        if (bland) bland = false;
      } else if (++stall > 40 && !bland) {
        bland = true;
        bland_after = iter;
        (void)bland_after;
      }
      last_obj = obj;
    }
    return LpStatus::Infeasible;  // iteration limit; treated as failure upstream
  }

  Num status2value(int j, int direction) const {
    // Value the entering variable started from.
    if (direction > 0) return lower_[j];
    return *upper_[j];
  }

  Num objective_value() const {
    Num total(0);
    for (int r = 0; r < m_; ++r) total += (*active_cost_)[basic_[r]] * x_basic_[r];
    for (int j = 0; j < in_.n_total; ++j) {
      if (status_[j] == kBasic) continue;
      Num v = status_[j] == kAtUpper ? *upper_[j] : lower_[j];
      if (!NumTraits<Num>::is_zero(v)) total += (*active_cost_)[j] * v;
    }
    return total;
  }

  void pivot_binv(int row, const std::vector<Num>& w) {
    Num piv = w[row];
    Num* prow = &binv_[static_cast<std::size_t>(row) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == row || NumTraits<Num>::is_zero(w[r])) continue;
      Num factor = w[r];
      Num* rrow = &binv_[static_cast<std::size_t>(r) * m_];
      for (int k = 0; k < m_; ++k)
        if (!NumTraits<Num>::is_zero(prow[k])) rrow[k] -= factor * prow[k];
    }
  }

  const Internal& in_;
  int m_;
  std::vector<std::vector<std::pair<int, Num>>> cols_;
  std::vector<Num> rhs_, lower_, cost_;
  std::vector<std::optional<Num>> upper_;
  std::vector<Num> art_sign_;

  std::vector<int> basic_;
  std::vector<unsigned char> status_;
  std::vector<Num> x_basic_;
  std::vector<Num> binv_;
  const std::vector<Num>* active_cost_ = nullptr;
  bool phase1_ = false;
};

// ---------------------------------------------------------------------------
// Sparse exact elimination: solves B x = b and B^T y = c for a basis matrix
// given as sparse columns. Refactors per call; basis matrices here have at
// most three nonzeros per column, so fill-in stays small.
// ---------------------------------------------------------------------------

class SparseSolver {
 public:
  // cols: m columns, each sparse (row, coefficient).
  explicit SparseSolver(std::vector<std::map<int, Rat>> cols) : n_(static_cast<int>(cols.size())) {
    // Row-major working copy.
    rows_.resize(n_);
    for (int j = 0; j < n_; ++j)
      for (const auto& [r, a] : cols[j]) rows_[r][j] = a;
    factor();
  }

  bool singular() const { return singular_; }

  // Solve M x = b.
  std::vector<Rat> solve(std::vector<Rat> b) const {
    // Forward-apply recorded eliminations, then back-substitute.
    for (const auto& op : ops_) b[op.target] -= op.factor * b[pivot_row_[op.step]];
    std::vector<Rat> x(n_);
    for (int k = n_ - 1; k >= 0; --k) {
      int pr = pivot_row_[k];
      int pc = pivot_col_[k];
      Rat v = b[pr];
      for (const auto& [j, a] : factored_rows_[pr])
        if (j != pc) v -= a * x[j];
      x[pc] = v / factored_rows_[pr].at(pc);
    }
    return x;
  }

  // Solve M^T y = c. With M = L*U from the elimination, this is
  // U^T w = c (forward, in pivot order) followed by y = E_1^T ... E_t^T w
  // (elimination ops transposed, applied in reverse).
  std::vector<Rat> solve_transpose(std::vector<Rat> c) const {
    std::vector<Rat> w(n_);
    for (int k = 0; k < n_; ++k) {
      int pc = pivot_col_[k];
      Rat v = c[pc];
      for (int k2 = 0; k2 < k; ++k2) {
        const auto& row = factored_rows_[pivot_row_[k2]];
        auto it = row.find(pc);
        if (it != row.end()) v -= it->second * w[k2];
      }
      w[k] = v / factored_rows_[pivot_row_[k]].at(pc);
    }
    std::vector<Rat> y(n_);
    for (int k = 0; k < n_; ++k) y[pivot_row_[k]] = w[k];
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it)
      y[pivot_row_[it->step]] -= it->factor * y[it->target];
    return y;
  }

 private:
  struct ElimOp {
    int step;    // pivot index
    int target;  // row the pivot row was subtracted from
    Rat factor;
  };

  void factor() {
    std::vector<char> row_used(n_, 0), col_used(n_, 0);
    for (int k = 0; k < n_; ++k) {
      // Pivot selection: unused column with fewest remaining nonzeros in
      // unused rows; within it the row with fewest entries.
      int best_col = -1, best_row = -1;
      long best_score = -1;
      for (int j = 0; j < n_; ++j) {
        if (col_used[j]) continue;
        long cnt = 0;
        int cand_row = -1;
        long cand_len = -1;
        for (int r = 0; r < n_; ++r) {
          if (row_used[r]) continue;
          auto it = rows_[r].find(j);
          if (it == rows_[r].end() || it->second == 0) continue;
          ++cnt;
          long len = static_cast<long>(rows_[r].size());
          if (cand_row < 0 || len < cand_len) {
            cand_row = r;
            cand_len = len;
          }
        }
        if (cnt == 0) continue;
        long score = cnt;
        if (best_col < 0 || score < best_score) {
          best_col = j;
          best_row = cand_row;
          best_score = score;
          if (score == 1) break;
        }
      }
      if (best_col < 0) {
        singular_ = true;
        return;
      }
      pivot_row_.push_back(best_row);
      pivot_col_.push_back(best_col);
      row_used[best_row] = 1;
      col_used[best_col] = 1;

      const Rat& piv = rows_[best_row][best_col];
      for (int r = 0; r < n_; ++r) {
        if (row_used[r]) continue;
        auto it = rows_[r].find(best_col);
        if (it == rows_[r].end() || it->second == 0) continue;
        Rat factor = it->second / piv;
        ops_.push_back({k, r, factor});
        for (const auto& [j, a] : rows_[best_row]) {
          if (col_used[j] && j != best_col) continue;
          Rat& cell = rows_[r][j];
          cell -= factor * a;
          if (cell == 0) rows_[r].erase(j);
        }
        rows_[r].erase(best_col);
      }
    }
    factored_rows_ = rows_;
  }

  int n_;
  bool singular_ = false;
  std::vector<std::map<int, Rat>> rows_;
  std::vector<std::map<int, Rat>> factored_rows_;
  std::vector<int> pivot_row_, pivot_col_;
  std::vector<ElimOp> ops_;
};

// ---------------------------------------------------------------------------
// Exact certification / repair around a candidate basis.
// ---------------------------------------------------------------------------

class ExactDriver {
 public:
  explicit ExactDriver(const Internal& in) : in_(in) {}

  // Returns nullopt if the candidate basis cannot be certified or repaired
  // cheaply (caller falls back to the pure exact engine).
  std::optional<LpSolution> certify_and_repair(Basis basis) {
    const int max_repair_pivots = 400;
    for (int round = 0; round <= max_repair_pivots; ++round) {
      auto lu = factor_basis(basis);
      if (!lu || lu->singular()) return std::nullopt;

      // Exact basic values.
      std::vector<Rat> rhs = in_.rhs;
      for (int j = 0; j < in_.n_total; ++j) {
        if (basis.status[j] == kBasic) continue;
        Rat v = nonbasic_value(basis, j);
        if (v == 0) continue;
        for (const auto& [r, a] : in_.cols[j]) rhs[r] -= a * v;
      }
      std::vector<Rat> xb = lu->solve(std::move(rhs));

      // Primal feasibility of the candidate vertex.
      for (int r = 0; r < in_.m; ++r) {
        int j = basis.basic[r];
        if (xb[r] < in_.lower[j]) return std::nullopt;
        if (in_.upper[j] && xb[r] > *in_.upper[j]) return std::nullopt;
      }

      // Duals and pricing.
      std::vector<Rat> cb(in_.m);
      for (int r = 0; r < in_.m; ++r) cb[r] = in_.cost[basis.basic[r]];
      std::vector<Rat> pi = lu->solve_transpose(std::move(cb));

      int entering = -1;
      int direction = 0;
      for (int j = 0; j < in_.n_total; ++j) {
        if (basis.status[j] == kBasic) continue;
        if (in_.upper[j] && *in_.upper[j] == in_.lower[j]) continue;
        Rat d = in_.cost[j];
        for (const auto& [r, a] : in_.cols[j]) d -= pi[r] * a;
        if (basis.status[j] == kAtLower && d < 0) {
          entering = j;
          direction = 1;
          break;  // Bland: first improving index
        }
        if (basis.status[j] == kAtUpper && d > 0) {
          entering = j;
          direction = -1;
          break;
        }
      }

      if (entering < 0) return finish(basis, xb);
      if (round == max_repair_pivots) return std::nullopt;

      // One exact primal pivot.
      std::vector<Rat> aj(in_.m, Rat(0));
      std::vector<Rat> col(in_.m, Rat(0));
      for (const auto& [r, a] : in_.cols[entering]) col[r] = a;
      aj = lu->solve(std::move(col));

      bool limited = false;
      Rat best_t(0);
      int leave_row = -1;
      int leave_to = kAtLower;
      if (in_.upper[entering]) {
        best_t = *in_.upper[entering] - in_.lower[entering];
        limited = true;
        leave_row = -2;
      }
      for (int r = 0; r < in_.m; ++r) {
        Rat delta = direction > 0 ? -aj[r] : aj[r];
        int bj = basis.basic[r];
        if (delta > 0) {
          if (!in_.upper[bj]) continue;
          Rat t = (*in_.upper[bj] - xb[r]) / delta;
          if (!limited || t < best_t ||
              (t == best_t && leave_row >= 0 && bj < basis.basic[leave_row])) {
            limited = true;
            best_t = t;
            leave_row = r;
            leave_to = kAtUpper;
          }
        } else if (delta < 0) {
          Rat t = (in_.lower[bj] - xb[r]) / delta;
          if (!limited || t < best_t ||
              (t == best_t && leave_row >= 0 && bj < basis.basic[leave_row])) {
            limited = true;
            best_t = t;
            leave_row = r;
            leave_to = kAtLower;
          }
        }
      }
      if (!limited) return std::nullopt;  // unbounded; not expected here

      if (leave_row == -2) {
        basis.status[entering] = basis.status[entering] == kAtLower ? kAtUpper : kAtLower;
      } else {
        basis.status[basis.basic[leave_row]] = static_cast<unsigned char>(leave_to);
        basis.status[entering] = kBasic;
        basis.basic[leave_row] = entering;
      }
    }
    return std::nullopt;
  }

 private:
  Rat nonbasic_value(const Basis& basis, int j) const {
    return basis.status[j] == kAtUpper ? *in_.upper[j] : in_.lower[j];
  }

  std::optional<SparseSolver> factor_basis(const Basis& basis) const {
    std::vector<std::map<int, Rat>> cols(in_.m);
    for (int r = 0; r < in_.m; ++r) {
      if (basis.basic[r] < 0 || basis.basic[r] >= in_.n_total) return std::nullopt;
      for (const auto& [row, a] : in_.cols[basis.basic[r]]) cols[r][row] = a;
    }
    SparseSolver solver(std::move(cols));
    return solver;
  }

  LpSolution finish(const Basis& basis, const std::vector<Rat>& xb) const {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.values.assign(in_.n_user, Rat(0));
    std::vector<Rat> all(in_.n_total, Rat(0));
    for (int j = 0; j < in_.n_total; ++j)
      if (basis.status[j] != kBasic) all[j] = nonbasic_value(basis, j);
    for (int r = 0; r < in_.m; ++r) all[basis.basic[r]] = xb[r];
    // Any artificial stuck in the basis must be zero for optimality of a
    // feasible program; a nonzero one means infeasible.
    for (int j = in_.n_struct; j < in_.n_total; ++j)
      if (all[j] != 0) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
    for (int j = 0; j < in_.n_user; ++j) sol.values[j] = all[j];
    sol.objective = 0;
    for (int j = 0; j < in_.n_user; ++j)
      if (sol.values[j] != 0) sol.objective += in_.cost[j] * sol.values[j];
    return sol;
  }

  const Internal& in_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, LpBackend backend) {
  Internal in = build_internal(lp);

  if (backend == LpBackend::Hybrid) {
    DenseSimplex<double> fast(in);
    Basis basis;
    LpStatus status = fast.run(basis);
    if (status == LpStatus::Optimal) {
      ExactDriver driver(in);
      auto certified = driver.certify_and_repair(basis);
      if (certified && certified->status == LpStatus::Optimal) return *certified;
    }
    // Fall through to the rational engine (also certifies infeasibility).
  }

  DenseSimplex<Rat> exact(in);
  Basis basis;
  LpStatus status = exact.run(basis);
  LpSolution sol;
  sol.status = status;
  if (status != LpStatus::Optimal) {
    if (status == LpStatus::Unbounded)
      throw Error(Errc::NumericFailure, "LP unbounded; formulation bug");
    return sol;
  }
  std::vector<Rat> all = exact.values();
  for (int j = in.n_struct; j < in.n_total; ++j)
    if (all[j] != 0) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
  sol.values.assign(all.begin(), all.begin() + in.n_user);
  sol.objective = 0;
  for (int j = 0; j < in.n_user; ++j)
    if (sol.values[j] != 0) sol.objective += in.cost[j] * sol.values[j];
  return sol;
}

Rat lp_residual(const LinearProgram& lp, const std::vector<Rat>& x) {
  Rat worst(0);
  for (const auto& row : lp.rows) {
    Rat lhs(0);
    for (const auto& [j, a] : row.terms) lhs += a * x[j];
    Rat diff = lhs - row.rhs;
    if (row.sense == '=' ) {
      if (diff < 0) diff = -diff;
    } else if (row.sense == '<') {
      if (diff < 0) diff = 0;
    } else {
      diff = diff < 0 ? -diff : Rat(0);
    }
    if (diff > worst) worst = diff;
  }
  for (std::size_t j = 0; j < lp.vars.size(); ++j) {
    if (x[j] < lp.vars[j].lower) {
      Rat d = lp.vars[j].lower - x[j];
      if (d > worst) worst = d;
    }
    if (lp.vars[j].upper && x[j] > *lp.vars[j].upper) {
      Rat d = x[j] - *lp.vars[j].upper;
      if (d > worst) worst = d;
    }
  }
  return worst;
}

std::string lp_to_text(const LinearProgram& lp) {
  std::ostringstream out;
  out << "Minimize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < lp.vars.size(); ++j) {
    if (lp.vars[j].objective == 0) continue;
    const Rat& c = lp.vars[j].objective;
    out << (first ? " " : c >= 0 ? " + " : " ") << rat_str(c) << " " << lp.vars[j].name;
    first = false;
  }
  if (first) out << " 0";
  out << "\nSubject To\n";
  for (const auto& row : lp.rows) {
    out << " " << row.name << ":";
    bool rf = true;
    for (const auto& [j, a] : row.terms) {
      out << (rf ? " " : a >= 0 ? " + " : " ") << rat_str(a) << " " << lp.vars[j].name;
      rf = false;
    }
    out << " " << (row.sense == '=' ? "=" : row.sense == '<' ? "<=" : ">=") << " "
        << rat_str(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : lp.vars) {
    out << " " << rat_str(v.lower) << " <= " << v.name;
    if (v.upper) out << " <= " << rat_str(*v.upper);
    out << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace turnsolve
