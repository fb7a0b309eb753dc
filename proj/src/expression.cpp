#include "lemm/expression.hpp"

#include <deque>
#include <map>

namespace lemm {

Expr Expr::var(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var_index = index;
  return Expr(std::move(n));
}

Expr Expr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::affine(Vec coeffs, Rational offset, std::vector<Expr> children) {
  if (coeffs.size() != children.size())
    throw LemmError("affine expression: coefficient/child count mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Affine;
  n->value = std::move(offset);
  n->coeffs = std::move(coeffs);
  n->children = std::move(children);
  return Expr(std::move(n));
}

Expr Expr::min(std::vector<Expr> children) {
  if (children.empty()) throw LemmError("min expression needs at least one operand");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Min;
  n->children = std::move(children);
  return Expr(std::move(n));
}

Expr Expr::max(std::vector<Expr> children) {
  if (children.empty()) throw LemmError("max expression needs at least one operand");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->children = std::move(children);
  return Expr(std::move(n));
}

namespace {

enum class SlotKind { Min, Max, Affine };

struct Slot {
  SlotKind kind = SlotKind::Affine;
  std::vector<std::pair<int, Rational>> row;  // (slot id, coefficient)
  Rational offset;
  std::vector<int> choice_slots;
};

}  // namespace

FlattenResult flatten(const std::vector<std::pair<int, Expr>>& equations) {
  std::map<int, int> target_slot;  // original index -> slot id
  for (size_t t = 0; t < equations.size(); ++t) {
    if (!target_slot.emplace(equations[t].first, static_cast<int>(t)).second)
      throw LemmError("duplicate equation target " + std::to_string(equations[t].first));
  }

  std::vector<Slot> slots(equations.size());
  std::deque<std::pair<int, Expr>> pending;  // (slot id, defining expression)
  for (size_t t = 0; t < equations.size(); ++t)
    pending.emplace_back(static_cast<int>(t), equations[t].second);

  auto slot_of_var = [&](int orig) {
    auto it = target_slot.find(orig);
    if (it == target_slot.end())
      throw LemmError("unresolvable variable reference z" + std::to_string(orig));
    return it->second;
  };
  auto new_aux = [&](const Expr& e) {
    slots.emplace_back();
    pending.emplace_back(static_cast<int>(slots.size()) - 1, e);
    return static_cast<int>(slots.size()) - 1;
  };
  // Slot id for a child expression: plain Vars resolve in place, everything
  // else gets one auxiliary.
  auto child_slot = [&](const Expr& e) {
    return e.kind() == Expr::Kind::Var ? slot_of_var(e.var_index()) : new_aux(e);
  };

  while (!pending.empty()) {
    auto [id, e] = pending.front();
    pending.pop_front();
    switch (e.kind()) {
      case Expr::Kind::Var:
        slots[id].kind = SlotKind::Affine;
        slots[id].row.emplace_back(slot_of_var(e.var_index()), Rational(1));
        break;
      case Expr::Kind::Const:
        slots[id].kind = SlotKind::Affine;
        slots[id].offset = e.value();
        break;
      case Expr::Kind::Affine: {
        slots[id].kind = SlotKind::Affine;
        slots[id].offset = e.offset();
        for (size_t c = 0; c < e.children().size(); ++c) {
          int child = child_slot(e.children()[c]);  // may grow `slots`
          slots[id].row.emplace_back(child, e.coeffs()[c]);
        }
        break;
      }
      case Expr::Kind::Min:
      case Expr::Kind::Max: {
        slots[id].kind = e.kind() == Expr::Kind::Min ? SlotKind::Min : SlotKind::Max;
        for (const auto& c : e.children()) {
          int child = child_slot(c);  // may grow `slots`
          slots[id].choice_slots.push_back(child);
        }
        break;
      }
    }
  }

  // Renumber: min slots first, then max, then affine, in creation order.
  int total = static_cast<int>(slots.size());
  std::vector<int> slot_to_index(total, 0);
  int next = 1;
  for (auto want : {SlotKind::Min, SlotKind::Max, SlotKind::Affine})
    for (int id = 0; id < total; ++id)
      if (slots[id].kind == want) slot_to_index[id] = next++;

  LemmSystem s;
  s.n = total;
  for (const auto& sl : slots) {
    if (sl.kind == SlotKind::Min) ++s.n1;
    if (sl.kind == SlotKind::Max) ++s.n2;
  }
  s.choices.resize(s.n1 + s.n2);
  s.affine_rows.resize(s.n - s.n1 - s.n2, Vec(s.n));
  s.offsets.assign(s.n, Rational(0));
  for (int id = 0; id < total; ++id) {
    int idx = slot_to_index[id];
    const Slot& sl = slots[id];
    if (sl.kind == SlotKind::Affine) {
      Vec& row = s.affine_rows[idx - s.n1 - s.n2 - 1];
      for (const auto& [child, coeff] : sl.row) row[slot_to_index[child] - 1] += coeff;
      s.offsets[idx - 1] = sl.offset;
    } else {
      for (int child : sl.choice_slots) s.choices[idx - 1].push_back(slot_to_index[child]);
    }
  }
  s.validate_and_normalize();

  FlattenResult out;
  out.system = std::move(s);
  for (size_t t = 0; t < equations.size(); ++t)
    out.original_to_system.push_back(slot_to_index[static_cast<int>(t)]);
  return out;
}

}  // namespace lemm
