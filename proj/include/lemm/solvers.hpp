#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lemm/conditions.hpp"
#include "lemm/linalg.hpp"
#include "lemm/system.hpp"

namespace lemm {

struct SolveOutcome {
  enum class Kind { Unique, NoSolution, Multiple };
  Kind kind = Kind::NoSolution;
  Solution solution;                // Unique: the verified solution
  std::optional<Strategy> witness;  // Unique: lexicographically first verifying strategy
  std::vector<Vec> solutions;       // Multiple: distinct verified solutions (capped)
};

struct EnumerateOptions {
  uint64_t budget = uint64_t(1) << 20;
  int jobs = 1;
  /// Stop at the first verified solution. Only sound when a certified
  /// halting condition guarantees uniqueness.
  bool early_exit_unique = false;
};

/// Fixes every choice and solves the residual affine system (I - Q^l) x = b.
LinearSolveResult solve_fixed_strategy(const LemmSystem& s, const Strategy& st);

/// Scans strategies in lexicographic order. Unique fixed-strategy solves are
/// certificate-checked; singular ones are searched for feasible points over
/// particular + kernel with the min/max consistency inequalities, including
/// a per-coordinate probe that detects positive-dimensional solution sets.
/// Throws BudgetExceeded when the strategy count exceeds the budget.
SolveOutcome solve_enumerate(const LemmSystem& s, const EnumerateOptions& opt = {});

/// One-type solver via the halting linear program: minimize sum(x) subject to
/// x_i >= x_l and x_k >= q_k^T x + b_k for max-only systems, the mirrored
/// maximization for min-only. Requires nonnegative coefficients, one operator
/// type, and the exact halting check to pass; throws PreconditionError
/// otherwise, LemmError if the program is unbounded.
Solution solve_lp_one_type(const LemmSystem& s);

struct ValueIterationResult {
  Vec values;            // dyadic rationals
  Rational error_bound;  // certified bound on the weighted max-norm error
  uint64_t iterations = 0;
  bool converged = false;
};

/// Iterates the system operator from zero. The halting witness w (w >= Qw + 1
/// for every vertex matrix) makes the operator a contraction in the weighted
/// norm ||v||_w = max |v_i| / w_i with factor 1 - 1/max(w); iterates are
/// rounded to a dyadic grid fine enough to keep the certified bound reachable.
ValueIterationResult solve_value_iteration(const LemmSystem& s, uint64_t max_iters,
                                           const Rational& epsilon);

enum class Answer { Yes, No, Unknown };
std::string to_string(Answer a);

struct DecideResult {
  Answer answer = Answer::Unknown;
  std::optional<Vec> witness;  // Yes: a feasible solution with x_i < beta
  std::string note;
};

struct DecideOptions {
  uint64_t budget = uint64_t(1) << 20;
  int jobs = 1;
};

/// Does a feasible solution with x_index < beta exist? Under a certified
/// halting condition the unique solution answers directly; otherwise each
/// strategy's polyhedron is searched for the exact infimum of x_index, with
/// strict comparison against beta (an unbounded infimum is always a Yes).
/// Returns Unknown only when the strategy budget is exceeded.
DecideResult decide(const LemmSystem& s, const DecisionQuery& q,
                    const ConditionReport& profile, const DecideOptions& opt = {});

}  // namespace lemm
