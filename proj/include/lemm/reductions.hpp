#pragma once

#include <string>
#include <vector>

#include "lemm/matrix.hpp"
#include "lemm/system.hpp"

namespace lemm {

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // signed DIMACS-style literals
};

/// DIMACS CNF subset: optional comments, a "p cnf <vars> <clauses>" line,
/// then zero-terminated clauses.
CnfFormula parse_dimacs(const std::string& text);

/// Partition instance {a_1..a_m} as a min-only system with nonnegative
/// coefficients: each a_j gets a +-1-valued min variable, the last affine row
/// pins sum a_j x_j to zero through its own self-loop. Feasible iff the
/// multiset splits into two equal-sum halves.
LemmSystem partition_to_lemm(const std::vector<long long>& a);

/// Appends a dummy zero variable and gives every affine row a compensating
/// coefficient on it, making all row sums exactly zero. Solutions extend by a
/// trailing 0.
LemmSystem normalize_sum_to_1(const LemmSystem& s);

/// Min-only rewrite with negated and positive copies of every variable
/// (3n+1 variables): max choices route to negated copies, affine rows read
/// min inputs from negated copies, a dummy variable absorbs the row sums. If
/// x solves the input, [x~; -x~; x~; 0] solves the output, where x~ flips the
/// sign of every coordinate past the min block.
LemmSystem to_min_only(const LemmSystem& s);

/// Max-only halting gadget for a CNF formula: clause variables choose among
/// their literals, assignment variables choose a sign, and an averaging row
/// closes cycles exactly when some assignment satisfies every clause. The
/// halting condition fails iff the formula is satisfiable.
LemmSystem sat_to_condition_instance(const CnfFormula& f);

struct MlpLayer {
  Mat weights;  // rows = layer output dimension
  Vec offsets;
};

struct Mlp {
  std::vector<MlpLayer> layers;
  Vec output_row;  // applied to the last layer's activations
  Rational output_offset;
};

struct MlpEncoding {
  LemmSystem system;
  std::vector<int> input_vars;  // 1-based system indices of the clamped inputs
  int output_var = 0;
};

/// Encodes box-clamped inputs (x = max{0, min{x, 1}}) and ReLU layers through
/// flattening. Feasible solutions correspond exactly to forward passes over
/// inputs in [0,1]^d, so deciding "output variable < beta" asks whether some
/// input drives the network output below beta.
MlpEncoding mlp_to_lemm(const Mlp& mlp);

/// {"layers": [{"W": [[...]], "b": [...]}, ...], "output_row": [...],
///  "output_offset": ...} or a bare layer array (single-output final layer).
Mlp parse_mlp_json(const std::string& text);

}  // namespace lemm
