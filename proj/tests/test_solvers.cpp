#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lemm/io.hpp"
#include "lemm/solvers.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace lemm;
using namespace lemm::testing;

TEST_CASE("solve_fixed_strategy reproduces the worked subsolutions") {
  LemmSystem e3 = example3();
  auto r3 = solve_fixed_strategy(e3, Strategy{{3}});
  REQUIRE(r3.unique);
  CHECK(r3.x ==
        rvec({Rational(-114, 7), Rational(-162, 7), Rational(-114, 7), Rational(-236, 7)}));

  auto r1 = solve_fixed_strategy(example1(), Strategy{{2}});
  REQUIRE(r1.unique);
  CHECK(r1.x == rvec({Rational(3, 5), Rational(3, 5), Rational(2, 5)}));

  LemmSystem aff;
  aff.n = 1;
  aff.affine_rows = {{Rational(1, 2)}};
  aff.offsets = {1};
  aff.validate_and_normalize();
  auto ra = solve_fixed_strategy(aff, Strategy{});
  REQUIRE(ra.unique);
  CHECK(ra.x == Vec{Rational(2)});
}

TEST_CASE("solve_enumerate on the worked examples") {
  SolveOutcome o1 = solve_enumerate(example1());
  REQUIRE(o1.kind == SolveOutcome::Kind::Unique);
  CHECK(o1.solution.values == rvec({Rational(3, 5), Rational(3, 5), Rational(2, 5)}));
  CHECK(o1.solution.verified);
  REQUIRE(o1.witness);
  CHECK(o1.witness->choice == std::vector<int>{2});

  SolveOutcome o3 = solve_enumerate(example3());
  REQUIRE(o3.kind == SolveOutcome::Kind::Unique);
  CHECK(o3.solution.values ==
        rvec({Rational(-26, 3), Rational(-26, 3), Rational(-6), Rational(-44, 3)}));
}

TEST_CASE("subsolution trap: the argmin subsolution is not the solution") {
  LemmSystem s = example3();
  Vec x2 = rvec({Rational(-26, 3), Rational(-26, 3), Rational(-6), Rational(-44, 3)});
  Vec x3 = rvec({Rational(-114, 7), Rational(-162, 7), Rational(-114, 7), Rational(-236, 7)});
  CHECK(x3[0] < x2[0]);  // greedy argmin-by-x1 would pick x3
  CHECK(verify_certificate(s, x2));
  CHECK_FALSE(verify_certificate(s, x3));
  // greedy strategy improvement (pick the branch with the smaller subsolution
  // value) is unsound here; regression-only, never offered as a solver
  SolveOutcome out = solve_enumerate(s);
  REQUIRE(out.kind == SolveOutcome::Kind::Unique);
  CHECK(out.solution.values == x2);
}

TEST_CASE("non-monotonicity regression: raising an offset drops the solution") {
  SolveOutcome lo = solve_enumerate(example1());
  SolveOutcome hi = solve_enumerate(example1_raised());
  REQUIRE(lo.kind == SolveOutcome::Kind::Unique);
  REQUIRE(hi.kind == SolveOutcome::Kind::Unique);
  // offsets increased entrywise ...
  for (int i = 0; i < 3; ++i) CHECK(example1_raised().offsets[i] >= example1().offsets[i]);
  // ... yet x1 strictly decreases: 3/5 -> 1/2
  CHECK(lo.solution.values[0] == Rational(3, 5));
  CHECK(hi.solution.values == rvec({Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  CHECK(hi.solution.values[0] < lo.solution.values[0]);
}

TEST_CASE("minimax gap regression: min-max exceeds max-min") {
  LemmSystem s = example2();
  std::map<std::pair<int, int>, Rational> x2;
  for (int l1 : {3, 4})
    for (int l2 : {5, 6}) {
      auto r = solve_fixed_strategy(s, Strategy{{l1, l2}});
      REQUIRE(r.unique);
      x2[{l1, l2}] = r.x[1];
    }
  auto minmax = std::min(std::max(x2[{3, 5}], x2[{3, 6}]), std::max(x2[{4, 5}], x2[{4, 6}]));
  auto maxmin = std::max(std::min(x2[{3, 5}], x2[{4, 5}]), std::min(x2[{3, 6}], x2[{4, 6}]));
  CHECK(minmax > Rational(3, 2));
  CHECK(maxmin < Rational(7, 5));
  CHECK(x2[{3, 5}] == Rational(1180, 779));
  CHECK(x2[{3, 6}] == Rational(1475, 1084));
}

TEST_CASE("solve_enumerate budget") {
  EnumerateOptions opt;
  opt.budget = 1;
  CHECK_THROWS_AS(solve_enumerate(example2(), opt), BudgetExceeded);
}

TEST_CASE("solve_lp_one_type on the documented examples") {
  // max-only: x1 = max{x2, x3}; x2 = x2/2 + 1; x3 = 0
  LemmSystem s;
  s.n1 = 0;
  s.n2 = 1;
  s.n = 3;
  s.choices = {{2, 3}};
  s.affine_rows = {{0, Rational(1, 2), 0}, {0, 0, 0}};
  s.offsets = {0, 1, 0};
  s.validate_and_normalize();
  CHECK(solve_lp_one_type(s).values == rvec({2, 2, 0}));

  // min-only: x1 = min{x2, x3}; x2 = 1; x3 = x3/2 + 1/4
  LemmSystem m;
  m.n1 = 1;
  m.n2 = 0;
  m.n = 3;
  m.choices = {{2, 3}};
  m.affine_rows = {{0, 0, 0}, {0, 0, Rational(1, 2)}};
  m.offsets = {0, 1, Rational(1, 4)};
  m.validate_and_normalize();
  CHECK(solve_lp_one_type(m).values == rvec({Rational(1, 2), 1, Rational(1, 2)}));

  CHECK_THROWS_AS(solve_lp_one_type(example1()), PreconditionError);   // negative coefficient
  CHECK_THROWS_AS(solve_lp_one_type(example2()), PreconditionError);   // both types
}

TEST_CASE("one-type LP equals enumeration on random halting instances") {
  SplitMix64 rng(9001);
  int exercised = 0;
  while (exercised < 30) {
    GenOptions g;
    g.type_mode = 3;
    g.max_n = 6;
    auto s = random_halting_nonneg(rng, g);
    REQUIRE(s);
    ++exercised;
    Solution lp = solve_lp_one_type(*s);
    SolveOutcome en = solve_enumerate(*s);
    REQUIRE(en.kind == SolveOutcome::Kind::Unique);
    CHECK(lp.values == en.solution.values);
  }
}

TEST_CASE("value iteration converges with a certified bound") {
  LemmSystem s;
  s.n = 1;
  s.affine_rows = {{Rational(1, 2)}};
  s.offsets = {1};
  s.validate_and_normalize();
  Rational eps(1, 1000000);
  auto r = solve_value_iteration(s, 100000, eps);
  REQUIRE(r.converged);
  CHECK(r.error_bound <= eps);
  // the bound is in the witness-weighted norm; here the witness is [2]
  CHECK((r.values[0] - Rational(2)).abs() <= eps * Rational(2));

  // precondition: the halting check rejects the partition-style self-loop
  LemmSystem loop;
  loop.n = 1;
  loop.affine_rows = {{1}};
  loop.offsets = {0};
  loop.validate_and_normalize();
  CHECK_THROWS_AS(solve_value_iteration(loop, 100, eps), PreconditionError);
  CHECK_THROWS_AS(solve_value_iteration(example1(), 100, eps), PreconditionError);
}

TEST_CASE("value iteration agrees with enumeration within its bound") {
  SplitMix64 rng(9002);
  Rational eps(1, 1000000000);
  for (int t = 0; t < 10; ++t) {
    GenOptions g;
    g.type_mode = 3;
    g.max_n = 5;
    auto s = random_halting_nonneg(rng, g);
    REQUIRE(s);
    auto vi = solve_value_iteration(*s, 1000000, eps);
    REQUIRE(vi.converged);
    SolveOutcome en = solve_enumerate(*s);
    REQUIRE(en.kind == SolveOutcome::Kind::Unique);
    Vec w = *check_c1_nonneg(*s).witness_x;
    Rational dist(0);
    for (int i = 0; i < s->n; ++i) {
      Rational d = (vi.values[i] - en.solution.values[i]).abs() / w[i];
      if (d > dist) dist = d;
    }
    CHECK(dist <= vi.error_bound);
    CHECK(vi.error_bound <= eps);
  }
}

TEST_CASE("decide on the first worked example") {
  LemmSystem s = example1();
  ConditionReport profile = check_conditions(s, {});
  DecideResult yes = decide(s, {1, Rational(7, 10)}, profile);
  CHECK(yes.answer == Answer::Yes);
  REQUIRE(yes.witness);
  CHECK((*yes.witness)[0] == Rational(3, 5));
  // strict inequality: beta equal to the solution value answers No
  CHECK(decide(s, {1, Rational(3, 5)}, profile).answer == Answer::No);
  CHECK(decide(s, {3, Rational(1, 2)}, profile).answer == Answer::Yes);
  CHECK_THROWS_AS(decide(s, {9, Rational(0)}, profile), LemmError);
}

TEST_CASE("decide routes through the certified-halting path when available") {
  SplitMix64 rng(9003);
  GenOptions g;
  g.type_mode = 0;
  g.max_n = 5;
  auto s = random_halting_nonneg(rng, g);
  REQUIRE(s);
  ConditionReport profile = check_conditions(*s, {});
  REQUIRE(profile.c1.kind == VerdictKind::Holds);
  SolveOutcome en = solve_enumerate(*s);
  REQUIRE(en.kind == SolveOutcome::Kind::Unique);
  const Rational& v0 = en.solution.values[0];
  CHECK(decide(*s, {1, v0 + Rational(1)}, profile).answer == Answer::Yes);
  CHECK(decide(*s, {1, v0}, profile).answer == Answer::No);
}

TEST_CASE("decide budget exceeded reports unknown") {
  DecideOptions opt;
  opt.budget = 1;
  ConditionReport profile;  // all unknown: forces the per-strategy path
  DecideResult r = decide(example2(), {2, Rational(0)}, profile, opt);
  CHECK(r.answer == Answer::Unknown);
  CHECK(r.note.find("budget") != std::string::npos);
}

TEST_CASE("uniqueness under certified halting at desk scale") {
  SplitMix64 rng(9004);
  int exercised = 0;
  while (exercised < 25) {
    GenOptions g;
    g.type_mode = 2;
    g.max_n = 6;
    auto s = random_halting_nonneg(rng, g);
    REQUIRE(s);
    ++exercised;
    SolveOutcome out = solve_enumerate(*s);
    CHECK(out.kind == SolveOutcome::Kind::Unique);
  }
}

TEST_CASE("parallel enumeration matches single-threaded") {
  LemmSystem s = example2();
  EnumerateOptions one, four;
  four.jobs = 4;
  SolveOutcome a = solve_enumerate(s, one), b = solve_enumerate(s, four);
  REQUIRE(a.kind == b.kind);
  if (a.kind == SolveOutcome::Kind::Unique)
    CHECK(a.solution.values == b.solution.values);
}
