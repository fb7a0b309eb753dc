#include "lemm/lp.hpp"

#include <cassert>

#include "lemm/system.hpp"

namespace lemm {

namespace {

/// Dense simplex tableau over exact rationals.
///
/// The standardized problem is  min c^T y  s.t.  A y = b, y >= 0, b >= 0,
/// built from the user problem by splitting free variables, adding one slack
/// per inequality, flipping rows with negative right-hand sides, and adding
/// one artificial per row for the phase-1 basis.
struct Tableau {
  int m = 0, ncols = 0;                   // rows, columns excluding rhs
  std::vector<Vec> t;                     // m x (ncols + 1), rhs last
  std::vector<int> basis;                 // size m
  Vec rc;                                 // reduced costs, size ncols
  Rational obj;                           // current objective value

  void compute_reduced(const Vec& cost) {
    rc = cost;
    obj = 0;
    for (int i = 0; i < m; ++i) {
      const Rational& cb = cost[basis[i]];
      if (cb.is_zero()) continue;
      obj += cb * t[i][ncols];
      for (int j = 0; j < ncols; ++j)
        if (!t[i][j].is_zero()) rc[j] -= cb * t[i][j];
    }
  }

  void pivot(int row, int col) {
    Rational piv = t[row][col];
    for (int j = 0; j <= ncols; ++j) t[row][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || t[i][col].is_zero()) continue;
      Rational f = t[i][col];
      for (int j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
    }
    if (!rc.empty() && !rc[col].is_zero()) {
      Rational f = rc[col];
      for (int j = 0; j < ncols; ++j) rc[j] -= f * t[row][j];
      obj += f * t[row][ncols];  // rc stores c_j - z_j; objective moves by -f * rhs
    }
    basis[row] = col;
  }

  /// Bland's rule until optimal; returns the entering column on
  /// unboundedness, -1 at optimality.
  int run(const std::vector<bool>& eligible) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (eligible[j] && rc[j].sign() < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return -1;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter].sign() <= 0) continue;
        Rational ratio = t[i][ncols] / t[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return enter;
      pivot(leave, enter);
    }
  }
};

struct Standardized {
  int nstruct = 0;             // structural columns (split free variables)
  int nslack = 0;
  int art_off = 0;             // first artificial column
  std::vector<int> pos_col, neg_col;  // per original variable; neg_col = -1 if nonneg
  std::vector<int> row_sign;   // +1 / -1 per constraint
  Tableau tab;
};

Standardized standardize(const LpProblem& p) {
  Standardized s;
  const int n = p.num_vars;
  const int m = static_cast<int>(p.constraints.size());
  s.pos_col.resize(n);
  s.neg_col.assign(n, -1);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    s.pos_col[j] = col++;
    if (!p.nonneg[j]) s.neg_col[j] = col++;
  }
  s.nstruct = col;
  for (const auto& c : p.constraints)
    if (c.rel != Rel::Eq) ++s.nslack;
  s.art_off = s.nstruct + s.nslack;

  Tableau& tb = s.tab;
  tb.m = m;
  tb.ncols = s.art_off + m;
  tb.t.assign(m, Vec(tb.ncols + 1, Rational(0)));
  tb.basis.resize(m);
  s.row_sign.assign(m, 1);
  int slack = s.nstruct;
  for (int i = 0; i < m; ++i) {
    const auto& c = p.constraints[i];
    Vec& row = tb.t[i];
    for (int j = 0; j < n; ++j) {
      row[s.pos_col[j]] = c.row[j];
      if (s.neg_col[j] >= 0) row[s.neg_col[j]] = -c.row[j];
    }
    if (c.rel != Rel::Eq) row[slack++] = c.rel == Rel::Le ? Rational(1) : Rational(-1);
    row[tb.ncols] = c.rhs;
    if (c.rhs.sign() < 0) {
      s.row_sign[i] = -1;
      for (auto& v : row) v = -v;
    }
    row[s.art_off + i] = 1;
    tb.basis[i] = s.art_off + i;
  }
  return s;
}

Vec extract_x(const Standardized& s, int nvars) {
  Vec ystd(s.tab.ncols, Rational(0));
  for (int i = 0; i < s.tab.m; ++i) ystd[s.tab.basis[i]] = s.tab.t[i][s.tab.ncols];
  Vec x(nvars);
  for (int j = 0; j < nvars; ++j) {
    x[j] = ystd[s.pos_col[j]];
    if (s.neg_col[j] >= 0) x[j] -= ystd[s.neg_col[j]];
  }
  return x;
}

bool ray_valid(const LpProblem& p, const Vec& d) {
  for (int j = 0; j < p.num_vars; ++j)
    if (p.nonneg[j] && d[j].sign() < 0) return false;
  bool nonzero = false;
  for (const auto& v : d)
    if (!v.is_zero()) nonzero = true;
  if (!nonzero) return false;
  for (const auto& c : p.constraints) {
    Rational dot(0);
    for (int j = 0; j < p.num_vars; ++j)
      if (!c.row[j].is_zero()) dot += c.row[j] * d[j];
    if (c.rel == Rel::Le && dot.sign() > 0) return false;
    if (c.rel == Rel::Ge && dot.sign() < 0) return false;
    if (c.rel == Rel::Eq && dot.sign() != 0) return false;
  }
  Rational cd(0);
  for (int j = 0; j < p.num_vars; ++j)
    if (!p.objective[j].is_zero()) cd += p.objective[j] * d[j];
  return p.maximize ? cd.sign() > 0 : cd.sign() < 0;
}

}  // namespace

bool lp_point_feasible(const LpProblem& p, const Vec& x) {
  if (static_cast<int>(x.size()) != p.num_vars) return false;
  for (int j = 0; j < p.num_vars; ++j)
    if (p.nonneg[j] && x[j].sign() < 0) return false;
  for (const auto& c : p.constraints) {
    Rational lhs(0);
    for (int j = 0; j < p.num_vars; ++j)
      if (!c.row[j].is_zero()) lhs += c.row[j] * x[j];
    if (c.rel == Rel::Le && lhs > c.rhs) return false;
    if (c.rel == Rel::Ge && lhs < c.rhs) return false;
    if (c.rel == Rel::Eq && lhs != c.rhs) return false;
  }
  return true;
}

bool validate_farkas(const LpProblem& p, const Vec& mu) {
  if (mu.size() != p.constraints.size()) return false;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (p.constraints[i].rel == Rel::Le && mu[i].sign() > 0) return false;
    if (p.constraints[i].rel == Rel::Ge && mu[i].sign() < 0) return false;
  }
  Vec combined(p.num_vars, Rational(0));
  Rational rhs(0);
  for (size_t i = 0; i < mu.size(); ++i) {
    if (mu[i].is_zero()) continue;
    for (int j = 0; j < p.num_vars; ++j)
      if (!p.constraints[i].row[j].is_zero()) combined[j] += mu[i] * p.constraints[i].row[j];
    rhs += mu[i] * p.constraints[i].rhs;
  }
  for (int j = 0; j < p.num_vars; ++j) {
    if (p.nonneg[j] ? combined[j].sign() > 0 : combined[j].sign() != 0) return false;
  }
  return rhs.sign() > 0;
}

LpResult lp_solve(const LpProblem& p) {
  if (static_cast<int>(p.objective.size()) != p.num_vars ||
      static_cast<int>(p.nonneg.size()) != p.num_vars)
    throw LemmError("lp_solve: objective/nonneg size mismatch");
  for (const auto& c : p.constraints)
    if (static_cast<int>(c.row.size()) != p.num_vars)
      throw LemmError("lp_solve: constraint row size mismatch");

  Standardized s = standardize(p);
  Tableau& tb = s.tab;

  // Phase 1: minimize the artificials.
  Vec cost1(tb.ncols, Rational(0));
  for (int j = s.art_off; j < tb.ncols; ++j) cost1[j] = 1;
  tb.compute_reduced(cost1);
  std::vector<bool> eligible(tb.ncols, true);
  int status = tb.run(eligible);
  if (status >= 0) throw LemmError("lp_solve: internal error, phase 1 unbounded");

  LpResult res;
  if (tb.obj.sign() > 0) {
    res.status = LpResult::Status::Infeasible;
    // y^T = cB^T B^-1 read from the artificial columns; reduced cost there
    // is 1 - y_i. Fold in the row flips to get original-space multipliers.
    res.farkas.resize(tb.m);
    for (int i = 0; i < tb.m; ++i) {
      Rational y = Rational(1) - tb.rc[s.art_off + i];
      res.farkas[i] = s.row_sign[i] < 0 ? -y : y;
    }
    if (!validate_farkas(p, res.farkas))
      throw LemmError("lp_solve: internal error, Farkas certificate failed validation");
    return res;
  }

  // Drive leftover artificials out of the basis; drop redundant rows.
  for (int i = tb.m - 1; i >= 0; --i) {
    if (tb.basis[i] < s.art_off) continue;
    int piv = -1;
    for (int j = 0; j < s.art_off; ++j)
      if (!tb.t[i][j].is_zero()) {
        piv = j;
        break;
      }
    if (piv >= 0) {
      tb.pivot(i, piv);
    } else {
      tb.t.erase(tb.t.begin() + i);
      tb.basis.erase(tb.basis.begin() + i);
      --tb.m;
    }
  }
  // Artificials are no longer needed.
  for (auto& row : tb.t) row.erase(row.begin() + s.art_off, row.begin() + tb.ncols);
  tb.ncols = s.art_off;

  // Phase 2.
  Vec cost2(tb.ncols, Rational(0));
  for (int j = 0; j < p.num_vars; ++j) {
    Rational c = p.maximize ? -p.objective[j] : p.objective[j];
    cost2[s.pos_col[j]] = c;
    if (s.neg_col[j] >= 0) cost2[s.neg_col[j]] = -c;
  }
  tb.compute_reduced(cost2);
  eligible.assign(tb.ncols, true);
  int enter = tb.run(eligible);
  if (enter >= 0) {
    res.status = LpResult::Status::Unbounded;
    Vec dstd(tb.ncols, Rational(0));
    dstd[enter] = 1;
    for (int i = 0; i < tb.m; ++i) dstd[tb.basis[i]] = -tb.t[i][enter];
    res.ray.resize(p.num_vars);
    for (int j = 0; j < p.num_vars; ++j) {
      res.ray[j] = dstd[s.pos_col[j]];
      if (s.neg_col[j] >= 0) res.ray[j] -= dstd[s.neg_col[j]];
    }
    res.ray_point = extract_x(s, p.num_vars);
    if (!ray_valid(p, res.ray) || !lp_point_feasible(p, res.ray_point))
      throw LemmError("lp_solve: internal error, unbounded ray failed validation");
    return res;
  }

  res.status = LpResult::Status::Optimal;
  res.x = extract_x(s, p.num_vars);
  if (!lp_point_feasible(p, res.x))
    throw LemmError("lp_solve: internal error, optimal point failed validation");
  res.value = 0;
  for (int j = 0; j < p.num_vars; ++j)
    if (!p.objective[j].is_zero()) res.value += p.objective[j] * res.x[j];
  return res;
}

}  // namespace lemm
