#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "turnsolve/error.hpp"
#include "turnsolve/rational.hpp"

namespace turnsolve {

/// Generic LP: minimize c'x subject to rows (=, <=, >=) and variable bounds.
struct LinearProgram {
  struct Variable {
    std::string name;
    Rat objective = 0;
    Rat lower = 0;
    std::optional<Rat> upper;
  };
  struct Row {
    std::string name;
    std::vector<std::pair<int, Rat>> terms;  // (variable index, coefficient)
    char sense = '=';                        // '=', '<' or '>'
    Rat rhs = 0;
  };

  std::vector<Variable> vars;
  std::vector<Row> rows;

  int add_variable(std::string name, Rat objective, Rat lower, std::optional<Rat> upper);
  void add_row(std::string name, std::vector<std::pair<int, Rat>> terms, char sense, Rat rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  Rat objective = 0;
  std::vector<Rat> values;  // one entry per LinearProgram variable
};

enum class LpBackend {
  /// Floating simplex first, then exact certification of the final basis
  /// and exact repair pivots if certification fails. Falls back to the
  /// rational backend when the floating run is unusable.
  Hybrid,
  /// Exact rational simplex throughout (Dantzig pricing with a Bland
  /// anti-cycling fallback). Never fails on feasible bounded input.
  ExactRational,
};

/// Solves the LP exactly. The objective and values of the returned solution
/// are exact rationals regardless of backend.
LpSolution solve_lp(const LinearProgram& lp, LpBackend backend = LpBackend::Hybrid);

/// Residual check helper: max |Ax-b| violation over rows plus bound
/// violations; exact zero for solver output.
Rat lp_residual(const LinearProgram& lp, const std::vector<Rat>& x);

/// Human-readable LP-format text (objective, constraints, bounds) with
/// exact decimal coefficients.
std::string lp_to_text(const LinearProgram& lp);

}  // namespace turnsolve
