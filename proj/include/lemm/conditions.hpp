#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lemm/io.hpp"
#include "lemm/system.hpp"

namespace lemm {

enum class VerdictKind { Holds, Fails, Unknown };
std::string to_string(VerdictKind k);

struct StrategyWeight {
  Strategy strategy;
  Rational alpha;
};

/// A convex combination of strategy matrices whose spectral radius has a
/// certified lower bound >= 1; disproves the halting condition.
struct C1Witness {
  std::vector<StrategyWeight> weights;
  Rational rho_lower_bound;
  std::string certificate;  // "nonneg-exact" | "real-eigenvalue" | "trace-power"
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Vec> witness_x;      // halting: LP point with x >= Qx + 1 for every vertex
  std::optional<C1Witness> failure;  // halting failure: certified combination
  std::optional<Vec> farkas;         // halting failure shown by LP infeasibility
  int fail_row = 0;                  // nonneg / row-sum: first violating affine row, 1-based
  int fail_entry = 0;                // nonneg: violating coefficient (1-based), 0 = offset
  std::optional<Rational> fail_value;
  std::optional<std::pair<int, int>> one_type_counts;  // (n1, n2) when both types present
  std::string note;

  static Verdict holds() { return {VerdictKind::Holds}; }
};

struct ConditionReport {
  Verdict c1, c2, c3, c4;
};

/// All affine coefficients and offsets nonnegative; Fails carries the first
/// violating (row, entry).
Verdict check_c2(const LemmSystem& s);

/// Every affine row satisfies q_k^T 1 + b_k <= 1; Fails carries the first
/// violating row.
Verdict check_c3(const LemmSystem& s);

/// Only one operator type present (n1 = 0 or n2 = 0).
Verdict check_c4(const LemmSystem& s);

/// Halting check for systems with nonnegative affine coefficients (offsets
/// may be arbitrary): feasibility of { x_i >= x_l + 1, x_k >= q_k^T x + 1,
/// x >= 0 }, which decides the condition exactly. Holds carries the witness
/// point, Fails the Farkas infeasibility certificate.
/// Throws PreconditionError on a negative affine coefficient.
Verdict check_c1_nonneg(const LemmSystem& s);

struct C1Options {
  uint64_t sample_budget = 1000;
  int product_depth = 8;
  uint64_t seed = 0;
  int jobs = 1;
  uint64_t vertex_budget = 4096;
  int max_power = 16;
};

/// Three-valued halting check for arbitrary systems. Fails only with a
/// certified witness (a convex combination of vertex matrices with rho >= 1,
/// or an LP infeasibility certificate on the nonnegative path); Holds only
/// via the exact nonnegative-coefficients characterization; Unknown reports
/// the search effort. Deterministic for a fixed seed.
Verdict check_c1_general(const LemmSystem& s, const C1Options& opt = {});

struct ConditionSelection {
  bool c1 = true, c2 = true, c3 = true, c4 = true;
};

ConditionReport check_conditions(const LemmSystem& s, const C1Options& opt = {},
                                 const ConditionSelection& sel = {});

ordered_json verdict_to_json(const Verdict& v);
ordered_json report_to_json(const ConditionReport& r, const ConditionSelection& sel = {});

}  // namespace lemm
