#pragma once

#include <vector>

#include "lemm/rational.hpp"

namespace lemm {

enum class Rel { Le, Ge, Eq };

struct LpConstraint {
  Vec row;  // length num_vars
  Rel rel = Rel::Le;
  Rational rhs;
};

struct LpProblem {
  int num_vars = 0;
  bool maximize = false;
  Vec objective;  // length num_vars
  std::vector<LpConstraint> constraints;
  std::vector<bool> nonneg;  // per variable; false = free

  void add(Vec row, Rel rel, Rational rhs) {
    constraints.push_back({std::move(row), rel, std::move(rhs)});
  }
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Optimal;
  Vec x;           // Optimal: a vertex attaining the optimum
  Rational value;  // Optimal: objective value in the problem's sense
  Vec farkas;      // Infeasible: one multiplier per constraint (validated)
  Vec ray_point;   // Unbounded: a feasible point
  Vec ray;         // Unbounded: improving direction (validated)
};

/// Exact rational two-phase simplex with Bland's anti-cycling rule. Free
/// variables are split internally; certificates are re-validated against the
/// original constraints before return. Fully deterministic.
LpResult lp_solve(const LpProblem& p);

/// Farkas validity in the original constraint space:
/// sign-compatible multipliers, combined row vanishing on free variables and
/// <= 0 on nonnegative ones, combined rhs > 0.
bool validate_farkas(const LpProblem& p, const Vec& mu);

/// x satisfies every constraint exactly (and nonnegativity flags).
bool lp_point_feasible(const LpProblem& p, const Vec& x);

}  // namespace lemm
