#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lemm/conditions.hpp"
#include "lemm/linalg.hpp"
#include "lemm/reductions.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lemm;
using namespace lemm::testing;

namespace {

// Recomputes the witness combination and re-certifies it from scratch.
void require_sound_failure(const LemmSystem& s, const Verdict& v) {
  REQUIRE(v.kind == VerdictKind::Fails);
  if (!v.failure) {
    REQUIRE(v.farkas);  // LP-infeasibility form, only legal for nonneg systems
    return;
  }
  Rational total(0);
  Mat W(s.n, s.n);
  for (const auto& sw : v.failure->weights) {
    REQUIRE(sw.alpha.sign() > 0);
    total += sw.alpha;
    W = W + strategy_matrix(s, sw.strategy).scaled(sw.alpha);
  }
  CHECK(total == Rational(1));
  auto cert = certify_rho_at_least_one(W);
  REQUIRE(cert);
  CHECK(cert->lower >= Rational(1));
  CHECK(v.failure->rho_lower_bound >= Rational(1));
}

}  // namespace

TEST_CASE("check_c2") {
  CHECK(check_c2(partition_to_lemm({1, 2, 3})).kind == VerdictKind::Holds);
  Verdict v = check_c2(example1());
  CHECK(v.kind == VerdictKind::Fails);
  CHECK(v.fail_row == 2);
  CHECK(v.fail_entry == 3);
  CHECK(*v.fail_value == Rational(-1));

  LemmSystem zero;
  zero.n = 1;
  zero.affine_rows = {{0}};
  zero.offsets = {0};
  zero.validate_and_normalize();
  CHECK(check_c2(zero).kind == VerdictKind::Holds);

  // negative offset alone also violates
  zero.offsets = {Rational(-1)};
  Verdict vb = check_c2(zero);
  CHECK(vb.kind == VerdictKind::Fails);
  CHECK(vb.fail_entry == 0);
}

TEST_CASE("check_c3") {
  CHECK(check_c3(normalize_sum_to_1(example1())).kind == VerdictKind::Holds);
  CHECK(check_c3(normalize_sum_to_1(partition_to_lemm({3, 5}))).kind == VerdictKind::Holds);

  LemmSystem over;
  over.n = 2;
  over.affine_rows = {{2, 0}, {0, 0}};
  over.offsets = {0, 0};
  over.validate_and_normalize();
  Verdict v = check_c3(over);
  CHECK(v.kind == VerdictKind::Fails);
  CHECK(v.fail_row == 1);

  LemmSystem boundary;  // q = 0, b = 1: row sum exactly 1
  boundary.n = 1;
  boundary.affine_rows = {{0}};
  boundary.offsets = {1};
  boundary.validate_and_normalize();
  CHECK(check_c3(boundary).kind == VerdictKind::Holds);
}

TEST_CASE("check_c4") {
  CHECK(check_c4(example1()).kind == VerdictKind::Holds);
  Verdict v = check_c4(example2());
  CHECK(v.kind == VerdictKind::Fails);
  CHECK(v.one_type_counts == std::pair<int, int>{1, 1});
  LemmSystem aff;
  aff.n = 1;
  aff.affine_rows = {{0}};
  aff.offsets = {5};
  aff.validate_and_normalize();
  CHECK(check_c4(aff).kind == VerdictKind::Holds);
}

TEST_CASE("check_c1_nonneg on single rows") {
  LemmSystem half;
  half.n = 1;
  half.affine_rows = {{Rational(1, 2)}};
  half.offsets = {3};  // offsets do not matter for the halting check
  half.validate_and_normalize();
  Verdict v = check_c1_nonneg(half);
  REQUIRE(v.kind == VerdictKind::Holds);
  CHECK(*v.witness_x == Vec{Rational(2)});

  LemmSystem loop;
  loop.n = 1;
  loop.affine_rows = {{Rational(1)}};
  loop.offsets = {0};
  loop.validate_and_normalize();
  Verdict f = check_c1_nonneg(loop);
  CHECK(f.kind == VerdictKind::Fails);
  REQUIRE(f.farkas);

  CHECK_THROWS_AS(check_c1_nonneg(example1()), PreconditionError);
}

TEST_CASE("check_c1_nonneg fails on the partition gadget") {
  LemmSystem s = partition_to_lemm({1, 2, 3});
  CHECK(check_c1_nonneg(s).kind == VerdictKind::Fails);
  Verdict g = check_c1_general(s);
  require_sound_failure(s, g);
  REQUIRE(g.failure);
  // certified rho >= 1 through the self-loop on the last affine row
  CHECK(g.failure->rho_lower_bound >= Rational(1));
}

TEST_CASE("check_c1_general on the worked examples") {
  C1Options opt;
  opt.sample_budget = 200;
  // halting holds but mixed signs admit no certificate: never Fails
  Verdict e2 = check_c1_general(example2(), opt);
  CHECK(e2.kind != VerdictKind::Fails);
  Verdict e3 = check_c1_general(example3(), opt);
  CHECK(e3.kind != VerdictKind::Fails);

  // mixed-sign system with an identity affine row fails at the vertex scan
  LemmSystem selfloop;
  selfloop.n = 2;
  selfloop.affine_rows = {{1, 0}, {Rational(-1, 2), 0}};
  selfloop.offsets = {1, 0};
  selfloop.validate_and_normalize();
  Verdict v = check_c1_general(selfloop, opt);
  require_sound_failure(selfloop, v);

  // nonneg halting system: Holds with the LP witness
  LemmSystem s = example1();
  s.affine_rows[0][2] = Rational(1, 3);  // make every coefficient nonnegative
  Verdict h = check_c1_general(s, opt);
  REQUIRE(h.kind == VerdictKind::Holds);
  REQUIRE(h.witness_x);
}

TEST_CASE("c1 Holds witness satisfies the margin inequality on every vertex") {
  SplitMix64 rng(7001);
  int exercised = 0;
  for (int t = 0; t < 60 && exercised < 15; ++t) {
    GenOptions g;
    g.type_mode = 2;
    g.max_n = 5;
    LemmSystem s = random_nonneg_system(rng, g);
    Verdict v = check_c1_general(s);
    if (v.kind != VerdictKind::Holds) continue;
    ++exercised;
    const Vec& x = *v.witness_x;
    StrategyEnumerator en(s);
    while (auto st = en.next()) {
      Vec qx = strategy_matrix(s, *st) * x;
      for (int i = 0; i < s.n; ++i) CHECK(x[i] >= qx[i] + Rational(1));
    }
    // and for 100 random dyadic convex combinations of vertices
    uint64_t nstrat = strategy_count_capped(s, 1 << 16);
    for (int c = 0; c < 100; ++c) {
      int k = static_cast<int>(rng.range(2, 4));
      Vec alphas = dyadic_weights(rng, k);
      Mat W(s.n, s.n);
      for (int j = 0; j < k; ++j)
        W = W + strategy_matrix(s, strategy_at(s, rng.below(nstrat))).scaled(alphas[j]);
      Vec wx = W * x;
      for (int i = 0; i < s.n; ++i) CHECK(x[i] >= wx[i] + Rational(1));
    }
  }
  CHECK(exercised >= 10);
}

TEST_CASE("check_c1_nonneg agrees with the all-vertex characteristic-polynomial oracle") {
  SplitMix64 rng(7002);
  int holds = 0, fails = 0;
  for (int t = 0; t < 60; ++t) {
    GenOptions g;
    g.type_mode = 3;
    g.max_n = 5;
    g.small_rows = rng.below(2) == 0;
    LemmSystem s = random_nonneg_system(rng, g);
    bool lp = check_c1_nonneg(s).kind == VerdictKind::Holds;
    bool oracle = all_vertices_rho_below_one(s);
    CHECK(lp == oracle);
    (lp ? holds : fails)++;
  }
  CHECK(holds > 5);
  CHECK(fails > 5);
}

TEST_CASE("report serialization is stable and inlines witnesses") {
  ConditionReport r = check_conditions(example1(), {});
  ordered_json j = report_to_json(r);
  CHECK(j.contains("c1"));
  CHECK(j["c2"]["verdict"] == "fails");
  CHECK(j["c2"]["witness"]["row"] == 2);
  CHECK(j["c4"]["verdict"] == "holds");
  std::string once = j.dump(2);
  std::string twice = report_to_json(check_conditions(example1(), {})).dump(2);
  CHECK(once == twice);
}
