#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lemm/matrix.hpp"
#include "lemm/rational.hpp"

namespace lemm {

struct LemmError : std::runtime_error {
  explicit LemmError(const std::string& msg) : std::runtime_error(msg) {}
};
struct ParseError : LemmError {
  explicit ParseError(const std::string& msg) : LemmError(msg) {}
};
struct BudgetExceeded : LemmError {
  explicit BudgetExceeded(const std::string& msg) : LemmError(msg) {}
};
struct PreconditionError : LemmError {
  explicit PreconditionError(const std::string& msg) : LemmError(msg) {}
};

/// System of linear equations with min and max operators.
///
/// Variables are 1-based, laid out as: [1, n1] min variables,
/// (n1, n1+n2] max variables, (n1+n2, n] affine variables.
/// Each min/max variable i carries a nonempty choice set J(i) of variable
/// indices; each affine variable k carries a coefficient row q_k and an
/// offset b_k. Offsets of min/max variables are identically zero.
///
/// Immutable after construction; all operations on it are pure.
struct LemmSystem {
  int n1 = 0;
  int n2 = 0;
  int n = 0;
  std::vector<std::vector<int>> choices;  // size n1+n2; sorted, deduplicated, 1-based
  std::vector<Vec> affine_rows;           // size n-n1-n2, each of length n
  Vec offsets;                            // length n; first n1+n2 entries are zero

  int num_choice_vars() const { return n1 + n2; }
  int num_affine_vars() const { return n - n1 - n2; }
  bool is_min_var(int i) const { return i >= 1 && i <= n1; }
  bool is_max_var(int i) const { return i > n1 && i <= n1 + n2; }
  bool is_affine_var(int i) const { return i > n1 + n2 && i <= n; }

  const std::vector<int>& choice_set(int i) const { return choices[i - 1]; }
  const Vec& affine_row(int k) const { return affine_rows[k - n1 - n2 - 1]; }
  const Rational& offset(int k) const { return offsets[k - 1]; }

  bool all_affine_nonneg() const;

  /// Checks every structural invariant; throws ParseError with the offending
  /// row index on violation. Sorts and deduplicates choice sets in place.
  void validate_and_normalize();
};

/// One choice l(i) in J(i) per min/max variable.
struct Strategy {
  std::vector<int> choice;  // 1-based targets, size n1+n2

  bool operator==(const Strategy& o) const { return choice == o.choice; }
};

struct Solution {
  Vec values;
  bool verified = false;
};

struct DecisionQuery {
  int index = 1;  // 1-based
  Rational threshold;
};

/// Number of strategies, saturated at `cap`.
uint64_t strategy_count_capped(const LemmSystem& s, uint64_t cap);

/// The idx-th strategy in lexicographic order of (l(1), ..., l(n1+n2)).
Strategy strategy_at(const LemmSystem& s, uint64_t idx);

/// Lazy lexicographic enumeration of all strategies.
class StrategyEnumerator {
 public:
  explicit StrategyEnumerator(const LemmSystem& s);
  std::optional<Strategy> next();

 private:
  const LemmSystem* sys_;
  std::vector<size_t> pos_;
  bool done_ = false;
  bool started_ = false;
};

/// Row i in [1, n1+n2] is the indicator of l(i); row k in (n1+n2, n] is q_k.
Mat strategy_matrix(const LemmSystem& s, const Strategy& strat);

/// True iff x satisfies every min, max, and affine equation exactly.
/// Throws LemmError on length mismatch.
bool verify_certificate(const LemmSystem& s, const Vec& x);

/// Applies the system's operator once: min/max rows take their extremum,
/// affine rows evaluate q_k^T x + b_k.
Vec apply_operator(const LemmSystem& s, const Vec& x);

}  // namespace lemm
