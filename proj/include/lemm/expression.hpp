#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "lemm/system.hpp"

namespace lemm {

/// Expression tree for systems with nested min/max/affine operators.
/// Var indices refer to equation targets of the surrounding system.
class Expr {
 public:
  enum class Kind { Var, Const, Affine, Min, Max };

  static Expr var(int index);
  static Expr constant(Rational value);
  /// coeffs[t] * children[t] summed, plus offset.
  static Expr affine(Vec coeffs, Rational offset, std::vector<Expr> children);
  static Expr min(std::vector<Expr> children);
  static Expr max(std::vector<Expr> children);

  Kind kind() const { return node_->kind; }
  int var_index() const { return node_->var_index; }
  const Rational& value() const { return node_->value; }
  const Vec& coeffs() const { return node_->coeffs; }
  const Rational& offset() const { return node_->value; }
  const std::vector<Expr>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind;
    int var_index = 0;
    Rational value;  // Const value or Affine offset
    Vec coeffs;
    std::vector<Expr> children;
  };
  std::shared_ptr<const Node> node_;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

struct FlattenResult {
  LemmSystem system;
  /// original_to_system[t] = 1-based system index of the t-th input target.
  std::vector<int> original_to_system;
};

/// Rewrites equations with nested operators into an equivalent flat system,
/// introducing one auxiliary variable per nested operator. Solutions of the
/// output restricted through original_to_system are exactly the solutions of
/// the input equations. Throws LemmError on a Var reference with no defining
/// equation or on duplicate targets.
FlattenResult flatten(const std::vector<std::pair<int, Expr>>& equations);

}  // namespace lemm
