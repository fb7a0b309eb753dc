#include "lemm/system.hpp"

#include <algorithm>

namespace lemm {

bool LemmSystem::all_affine_nonneg() const {
  for (const auto& row : affine_rows)
    for (const auto& v : row)
      if (v.sign() < 0) return false;
  return true;
}

void LemmSystem::validate_and_normalize() {
  if (n1 < 0 || n2 < 0 || n < 0) throw ParseError("variable counts must be nonnegative");
  if (n < n1 + n2) throw ParseError("n must be at least n1 + n2");
  if (static_cast<int>(choices.size()) != n1 + n2)
    throw ParseError("expected " + std::to_string(n1 + n2) + " choice sets, got " +
                     std::to_string(choices.size()));
  if (static_cast<int>(affine_rows.size()) != n - n1 - n2)
    throw ParseError("expected " + std::to_string(n - n1 - n2) + " affine rows, got " +
                     std::to_string(affine_rows.size()));
  if (static_cast<int>(offsets.size()) != n)
    throw ParseError("offset vector must have length n");

  for (int i = 1; i <= n1 + n2; ++i) {
    auto& J = choices[i - 1];
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    if (J.empty()) throw ParseError("empty choice set at row " + std::to_string(i));
    for (int l : J)
      if (l < 1 || l > n)
        throw ParseError("choice index " + std::to_string(l) + " out of range at row " +
                         std::to_string(i));
    if (!offsets[i - 1].is_zero())
      throw ParseError("nonzero offset on min/max row " + std::to_string(i));
  }
  for (int k = n1 + n2 + 1; k <= n; ++k) {
    if (static_cast<int>(affine_row(k).size()) != n)
      throw ParseError("affine row " + std::to_string(k) + " must have length n");
  }
}

uint64_t strategy_count_capped(const LemmSystem& s, uint64_t cap) {
  uint64_t count = 1;
  for (const auto& J : s.choices) {
    uint64_t size = static_cast<uint64_t>(J.size());
    if (count > cap / size) return cap;  // count * size would exceed cap
    count *= size;
    if (count >= cap) return cap;
  }
  return count;
}

Strategy strategy_at(const LemmSystem& s, uint64_t idx) {
  int m = s.num_choice_vars();
  Strategy st;
  st.choice.resize(m);
  // mixed-radix decode, least significant digit last (lexicographic order)
  for (int i = m - 1; i >= 0; --i) {
    uint64_t base = s.choices[i].size();
    st.choice[i] = s.choices[i][idx % base];
    idx /= base;
  }
  return st;
}

StrategyEnumerator::StrategyEnumerator(const LemmSystem& s)
    : sys_(&s), pos_(s.num_choice_vars(), 0) {}

std::optional<Strategy> StrategyEnumerator::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // advance odometer, rightmost digit fastest
    int i = static_cast<int>(pos_.size()) - 1;
    while (i >= 0) {
      if (++pos_[i] < sys_->choices[i].size()) break;
      pos_[i] = 0;
      --i;
    }
    if (i < 0) {
      done_ = true;
      return std::nullopt;
    }
  }
  started_ = true;
  if (pos_.empty()) done_ = true;  // single empty strategy
  Strategy st;
  st.choice.resize(pos_.size());
  for (size_t i = 0; i < pos_.size(); ++i) st.choice[i] = sys_->choices[i][pos_[i]];
  return st;
}

Mat strategy_matrix(const LemmSystem& s, const Strategy& strat) {
  Mat Q(s.n, s.n);
  for (int i = 1; i <= s.num_choice_vars(); ++i) Q.at(i - 1, strat.choice[i - 1] - 1) = 1;
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    const Vec& q = s.affine_row(k);
    for (int j = 0; j < s.n; ++j) Q.at(k - 1, j) = q[j];
  }
  return Q;
}

Vec apply_operator(const LemmSystem& s, const Vec& x) {
  Vec y(s.n);
  for (int i = 1; i <= s.num_choice_vars(); ++i) {
    const auto& J = s.choice_set(i);
    Rational ext = x[J[0] - 1];
    for (size_t t = 1; t < J.size(); ++t) {
      const Rational& v = x[J[t] - 1];
      if (s.is_min_var(i) ? v < ext : v > ext) ext = v;
    }
    y[i - 1] = ext;
  }
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    const Vec& q = s.affine_row(k);
    Rational acc = s.offsets[k - 1];
    for (int j = 0; j < s.n; ++j)
      if (!q[j].is_zero()) acc += q[j] * x[j];
    y[k - 1] = acc;
  }
  return y;
}

bool verify_certificate(const LemmSystem& s, const Vec& x) {
  if (static_cast<int>(x.size()) != s.n)
    throw LemmError("certificate length " + std::to_string(x.size()) + " does not match n = " +
                    std::to_string(s.n));
  Vec y = apply_operator(s, x);
  return y == x;
}

}  // namespace lemm
