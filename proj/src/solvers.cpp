#include "lemm/solvers.hpp"

#include <algorithm>

#include "lemm/lp.hpp"
#include "lemm/parallel.hpp"

namespace lemm {

LinearSolveResult solve_fixed_strategy(const LemmSystem& s, const Strategy& st) {
  if (static_cast<int>(st.choice.size()) != s.num_choice_vars())
    throw LemmError("strategy has wrong arity");
  return solve_linear(strategy_matrix(s, st), s.offsets);
}

namespace {

// The solution set of one strategy: empty, a single point, or a
// positive-dimensional polyhedron (witnessed by two distinct points).
struct StrategySolve {
  std::vector<Vec> points;  // verified feasible solutions, distinct
};

// Consistency inequalities of a strategy, as rows over the kernel parameters:
// for a min variable i with pick l0, (x_{l0} - x_l) <= 0 for every other
// l in J(i); mirrored for max variables.
void add_consistency_rows(const LemmSystem& s, const Strategy& st,
                          const std::vector<Vec>& kernel, const Vec& particular,
                          LpProblem& p) {
  const int d = static_cast<int>(kernel.size());
  for (int i = 1; i <= s.num_choice_vars(); ++i) {
    int l0 = st.choice[i - 1];
    for (int l : s.choice_set(i)) {
      if (l == l0) continue;
      Vec row(d);
      for (int r = 0; r < d; ++r) row[r] = kernel[r][l0 - 1] - kernel[r][l - 1];
      Rational rhs = particular[l - 1] - particular[l0 - 1];
      if (s.is_min_var(i))
        p.add(std::move(row), Rel::Le, std::move(rhs));
      else
        p.add(std::move(row), Rel::Ge, std::move(rhs));
    }
  }
}

Vec combine(const Vec& particular, const std::vector<Vec>& kernel, const Vec& t) {
  Vec x = particular;
  for (size_t r = 0; r < kernel.size(); ++r) {
    if (t[r].is_zero()) continue;
    for (size_t j = 0; j < x.size(); ++j) x[j] += t[r] * kernel[r][j];
  }
  return x;
}

StrategySolve analyze_strategy(const LemmSystem& s, const Strategy& st) {
  StrategySolve out;
  LinearSolveResult lin = solve_fixed_strategy(s, st);
  if (lin.unique) {
    if (verify_certificate(s, lin.x)) out.points.push_back(std::move(lin.x));
    return out;
  }
  if (!lin.particular) return out;  // inconsistent affine system

  const int d = static_cast<int>(lin.kernel.size());
  LpProblem feas;
  feas.num_vars = d;
  feas.objective.assign(d, Rational(0));
  feas.nonneg.assign(d, false);
  add_consistency_rows(s, st, lin.kernel, *lin.particular, feas);
  LpResult r = lp_solve(feas);
  if (r.status == LpResult::Status::Infeasible) return out;
  Vec first = combine(*lin.particular, lin.kernel, r.x);
  if (!verify_certificate(s, first))
    throw LemmError("solve_enumerate: feasible polyhedron point failed verification");
  out.points.push_back(first);

  // Probe each coordinate the kernel can move for a second distinct point.
  for (int j = 0; j < s.n && out.points.size() < 2; ++j) {
    bool movable = false;
    for (int rr = 0; rr < d; ++rr)
      if (!lin.kernel[rr][j].is_zero()) movable = true;
    if (!movable) continue;
    for (bool maximize : {false, true}) {
      LpProblem probe = feas;
      probe.maximize = maximize;
      for (int rr = 0; rr < d; ++rr) probe.objective[rr] = lin.kernel[rr][j];
      LpResult pr = lp_solve(probe);
      Vec cand;
      if (pr.status == LpResult::Status::Unbounded) {
        Vec t = pr.ray_point;
        for (int rr = 0; rr < d; ++rr) t[rr] += pr.ray[rr];
        cand = combine(*lin.particular, lin.kernel, t);
      } else {
        cand = combine(*lin.particular, lin.kernel, pr.x);
      }
      if (cand != first) {
        if (!verify_certificate(s, cand))
          throw LemmError("solve_enumerate: probe point failed verification");
        out.points.push_back(std::move(cand));
        break;
      }
    }
  }
  return out;
}

}  // namespace

SolveOutcome solve_enumerate(const LemmSystem& s, const EnumerateOptions& opt) {
  uint64_t count = strategy_count_capped(s, opt.budget + 1);
  if (count > opt.budget)
    throw BudgetExceeded("strategy count exceeds budget of " + std::to_string(opt.budget));

  std::vector<Vec> distinct;
  std::optional<Strategy> first_witness;
  bool stop_early = false;

  blockwise_scan<StrategySolve>(
      count, opt.jobs, [&](uint64_t idx) { return analyze_strategy(s, strategy_at(s, idx)); },
      [&](uint64_t idx, StrategySolve& r) {
        for (auto& x : r.points) {
          if (std::find(distinct.begin(), distinct.end(), x) == distinct.end()) {
            distinct.push_back(std::move(x));
            if (!first_witness) first_witness = strategy_at(s, idx);
          }
        }
        if (opt.early_exit_unique && !distinct.empty()) stop_early = true;
        if (distinct.size() >= 2) stop_early = true;
        return !stop_early;
      });

  SolveOutcome out;
  if (distinct.empty()) {
    out.kind = SolveOutcome::Kind::NoSolution;
  } else if (distinct.size() == 1) {
    out.kind = SolveOutcome::Kind::Unique;
    out.solution = {distinct[0], true};
    out.witness = first_witness;
  } else {
    out.kind = SolveOutcome::Kind::Multiple;
    out.solutions = std::move(distinct);
  }
  return out;
}

Solution solve_lp_one_type(const LemmSystem& s) {
  if (check_c2(s).kind != VerdictKind::Holds)
    throw PreconditionError("solve_lp_one_type: nonnegative-coefficients condition fails");
  if (check_c4(s).kind != VerdictKind::Holds)
    throw PreconditionError("solve_lp_one_type: both operator types present");
  if (check_c1_nonneg(s).kind != VerdictKind::Holds)
    throw PreconditionError("solve_lp_one_type: halting condition fails");

  const bool min_only = s.n2 == 0 && s.n1 > 0;
  LpProblem p;
  p.num_vars = s.n;
  p.maximize = min_only;
  p.objective.assign(s.n, Rational(1));
  p.nonneg.assign(s.n, false);
  Rel rel = min_only ? Rel::Le : Rel::Ge;
  for (int i = 1; i <= s.num_choice_vars(); ++i)
    for (int l : s.choice_set(i)) {
      Vec row(s.n, Rational(0));
      row[i - 1] = 1;
      row[l - 1] -= 1;
      p.add(std::move(row), rel, Rational(0));
    }
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    Vec row(s.n, Rational(0));
    const Vec& q = s.affine_row(k);
    for (int j = 0; j < s.n; ++j) row[j] = -q[j];
    row[k - 1] += 1;
    p.add(std::move(row), rel, s.offset(k));
  }
  LpResult r = lp_solve(p);
  if (r.status == LpResult::Status::Unbounded)
    throw LemmError("solve_lp_one_type: program unbounded, halting violation missed upstream");
  if (r.status != LpResult::Status::Optimal)
    throw LemmError("solve_lp_one_type: internal error, program infeasible");
  if (!verify_certificate(s, r.x))
    throw LemmError("solve_lp_one_type: optimum failed certificate verification");
  return {r.x, true};
}

ValueIterationResult solve_value_iteration(const LemmSystem& s, uint64_t max_iters,
                                           const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw PreconditionError("solve_value_iteration: epsilon must be > 0");
  if (check_c2(s).kind != VerdictKind::Holds)
    throw PreconditionError("solve_value_iteration: nonnegative-coefficients condition fails");
  Verdict c1 = check_c1_nonneg(s);
  if (c1.kind != VerdictKind::Holds)
    throw PreconditionError("solve_value_iteration: halting condition fails");
  const Vec& w = *c1.witness_x;

  Rational W(1);
  for (const auto& wi : w)
    if (wi > W) W = wi;
  Rational gamma = (W - Rational(1)) / W;

  // Dyadic grid fine enough that rounding noise stays below the target:
  // delta <= epsilon / (4 W^2).
  Rational need = (W * W * Rational(4)) / epsilon;
  long k = 32;
  mpz_class ceil_need = need.numerator() / need.denominator() + 1;
  k = std::max(k, static_cast<long>(mpz_sizeinbase(ceil_need.get_mpz_t(), 2)) + 1);
  Rational delta = Rational::pow2(k);

  ValueIterationResult res;
  Vec x(s.n, Rational(0));
  for (uint64_t m = 1; m <= max_iters; ++m) {
    Vec y = apply_operator(s, x);
    Rational e(0);
    for (int j = 0; j < s.n; ++j) {
      Rational d = (y[j] - x[j]).abs() / w[j];
      if (d > e) e = d;
    }
    // ||x - x*||_w <= e * W, so the fresh iterate y is within gamma*e*W.
    Rational bound = gamma * e * W + delta;
    for (auto& v : y) v = Rational::round_dyadic(v, k);
    res.iterations = m;
    if (bound <= epsilon) {
      res.values = std::move(y);
      res.error_bound = bound;
      res.converged = true;
      return res;
    }
    x = std::move(y);
    res.error_bound = bound;
  }
  res.values = std::move(x);
  res.converged = false;
  return res;
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    default: return "unknown";
  }
}

namespace {

// Exact infimum of x_index over one strategy's feasible polyhedron,
// formulated directly over x with the fixed-strategy equalities plus the
// consistency inequalities.
struct StrategyInfimum {
  enum class Kind { Infeasible, Finite, Unbounded } kind = Kind::Infeasible;
  Rational inf;
  Vec point;  // attaining point (Finite) or a feasible base point (Unbounded)
  Vec ray;    // Unbounded: direction with ray[index] < 0
};

StrategyInfimum strategy_infimum(const LemmSystem& s, const Strategy& st, int index) {
  LpProblem p;
  p.num_vars = s.n;
  p.objective.assign(s.n, Rational(0));
  p.objective[index - 1] = 1;
  p.nonneg.assign(s.n, false);
  for (int i = 1; i <= s.num_choice_vars(); ++i) {
    int l0 = st.choice[i - 1];
    Vec row(s.n, Rational(0));
    row[i - 1] = 1;
    row[l0 - 1] -= 1;
    p.add(std::move(row), Rel::Eq, Rational(0));
    for (int l : s.choice_set(i)) {
      if (l == l0) continue;
      Vec ineq(s.n, Rational(0));
      ineq[l0 - 1] = 1;
      ineq[l - 1] -= 1;
      p.add(std::move(ineq), s.is_min_var(i) ? Rel::Le : Rel::Ge, Rational(0));
    }
  }
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    Vec row(s.n, Rational(0));
    const Vec& q = s.affine_row(k);
    for (int j = 0; j < s.n; ++j) row[j] = -q[j];
    row[k - 1] += 1;
    p.add(std::move(row), Rel::Eq, s.offset(k));
  }
  LpResult r = lp_solve(p);
  StrategyInfimum out;
  if (r.status == LpResult::Status::Infeasible) return out;
  if (r.status == LpResult::Status::Unbounded) {
    out.kind = StrategyInfimum::Kind::Unbounded;
    out.point = r.ray_point;
    out.ray = r.ray;
    return out;
  }
  out.kind = StrategyInfimum::Kind::Finite;
  out.inf = r.value;
  out.point = r.x;
  return out;
}

}  // namespace

DecideResult decide(const LemmSystem& s, const DecisionQuery& q,
                    const ConditionReport& profile, const DecideOptions& opt) {
  if (q.index < 1 || q.index > s.n)
    throw LemmError("decide: index " + std::to_string(q.index) + " out of range");

  DecideResult res;
  if (profile.c1.kind == VerdictKind::Holds) {
    // Certified halting: the unique solution answers the query.
    Solution sol;
    if (profile.c2.kind == VerdictKind::Holds && profile.c4.kind == VerdictKind::Holds) {
      sol = solve_lp_one_type(s);
    } else {
      try {
        SolveOutcome out = solve_enumerate(s, {opt.budget, opt.jobs, true});
        if (out.kind != SolveOutcome::Kind::Unique)
          throw LemmError("decide: certified halting but enumeration found " +
                          std::to_string(out.solutions.size()) + " solutions");
        sol = out.solution;
      } catch (const BudgetExceeded& e) {
        res.answer = Answer::Unknown;
        res.note = e.what();
        return res;
      }
    }
    if (sol.values[q.index - 1] < q.threshold) {
      res.answer = Answer::Yes;
      res.witness = sol.values;
    } else {
      res.answer = Answer::No;
    }
    return res;
  }

  uint64_t count = strategy_count_capped(s, opt.budget + 1);
  if (count > opt.budget) {
    res.answer = Answer::Unknown;
    res.note = "strategy count exceeds budget of " + std::to_string(opt.budget);
    return res;
  }

  bool found = false;
  blockwise_scan<StrategyInfimum>(
      count, opt.jobs,
      [&](uint64_t idx) { return strategy_infimum(s, strategy_at(s, idx), q.index); },
      [&](uint64_t, StrategyInfimum& r) {
        if (r.kind == StrategyInfimum::Kind::Infeasible) return true;
        Vec witness;
        if (r.kind == StrategyInfimum::Kind::Unbounded) {
          // walk the ray far enough to cross the threshold
          Rational t(0);
          if (r.point[q.index - 1] >= q.threshold)
            t = (r.point[q.index - 1] - q.threshold) / (-r.ray[q.index - 1]) + Rational(1);
          witness = r.point;
          for (int j = 0; j < s.n; ++j) witness[j] += t * r.ray[j];
        } else {
          if (r.inf >= q.threshold) return true;  // strict comparison, exact vertex optimum
          witness = r.point;
        }
        if (!verify_certificate(s, witness))
          throw LemmError("decide: witness failed certificate verification");
        res.answer = Answer::Yes;
        res.witness = std::move(witness);
        found = true;
        return false;
      });
  if (!found) res.answer = Answer::No;
  return res;
}

}  // namespace lemm
