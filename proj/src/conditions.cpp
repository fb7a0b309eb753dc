#include "lemm/conditions.hpp"

#include <algorithm>

#include "lemm/linalg.hpp"
#include "lemm/lp.hpp"
#include "lemm/parallel.hpp"
#include "lemm/rng.hpp"

namespace lemm {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "holds";
    case VerdictKind::Fails: return "fails";
    default: return "unknown";
  }
}

Vec dyadic_weights(SplitMix64& rng, int count, int bits) {
  const uint64_t denom = 1ULL << bits;
  std::vector<uint64_t> cuts{0, denom};
  for (int i = 1; i < count; ++i) cuts.push_back(rng.below(denom + 1));
  std::sort(cuts.begin(), cuts.end());
  Vec w;
  for (int i = 0; i < count; ++i)
    w.push_back(Rational(static_cast<long>(cuts[i + 1] - cuts[i]),
                         static_cast<long>(denom)));
  return w;
}

Verdict check_c2(const LemmSystem& s) {
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    const Vec& q = s.affine_row(k);
    for (int j = 0; j < s.n; ++j)
      if (q[j].sign() < 0) {
        Verdict v{VerdictKind::Fails};
        v.fail_row = k;
        v.fail_entry = j + 1;
        v.fail_value = q[j];
        return v;
      }
    if (s.offset(k).sign() < 0) {
      Verdict v{VerdictKind::Fails};
      v.fail_row = k;
      v.fail_entry = 0;
      v.fail_value = s.offset(k);
      return v;
    }
  }
  return Verdict::holds();
}

Verdict check_c3(const LemmSystem& s) {
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    Rational sum = s.offset(k);
    for (const auto& v : s.affine_row(k)) sum += v;
    if (sum > Rational(1)) {
      Verdict v{VerdictKind::Fails};
      v.fail_row = k;
      v.fail_value = sum;
      return v;
    }
  }
  return Verdict::holds();
}

Verdict check_c4(const LemmSystem& s) {
  if (s.n1 == 0 || s.n2 == 0) return Verdict::holds();
  Verdict v{VerdictKind::Fails};
  v.one_type_counts = {s.n1, s.n2};
  return v;
}

Verdict check_c1_nonneg(const LemmSystem& s) {
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k)
    for (const auto& c : s.affine_row(k))
      if (c.sign() < 0)
        throw PreconditionError("check_c1_nonneg: negative coefficient in affine row " +
                                std::to_string(k));
  LpProblem p;
  p.num_vars = s.n;
  p.objective.assign(s.n, Rational(1));  // small witnesses help downstream users
  p.nonneg.assign(s.n, true);
  for (int i = 1; i <= s.num_choice_vars(); ++i)
    for (int l : s.choice_set(i)) {
      Vec row(s.n, Rational(0));
      row[i - 1] = 1;
      row[l - 1] -= 1;  // handles l == i: 0 >= 1 will be infeasible, as it must
      p.add(std::move(row), Rel::Ge, Rational(1));
    }
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    Vec row(s.n, Rational(0));
    const Vec& q = s.affine_row(k);
    for (int j = 0; j < s.n; ++j) row[j] = -q[j];
    row[k - 1] += 1;
    p.add(std::move(row), Rel::Ge, Rational(1));
  }
  LpResult r = lp_solve(p);
  if (r.status == LpResult::Status::Optimal) {
    Verdict v{VerdictKind::Holds};
    v.witness_x = r.x;
    return v;
  }
  Verdict v{VerdictKind::Fails};
  v.farkas = r.farkas;
  v.note = "halting inequality system infeasible";
  return v;
}

namespace {

std::optional<C1Witness> certify_vertex(const LemmSystem& s, const Strategy& st,
                                        int max_power) {
  auto cert = certify_rho_at_least_one(strategy_matrix(s, st), max_power);
  if (!cert) return std::nullopt;
  C1Witness w;
  w.weights.push_back({st, Rational(1)});
  w.rho_lower_bound = cert->lower;
  w.certificate = cert->kind;
  return w;
}

std::optional<C1Witness> certify_combination(const LemmSystem& s,
                                             const std::vector<Strategy>& parts,
                                             const Vec& alphas, int max_power) {
  Mat W(s.n, s.n);
  Rational total(0);
  for (size_t t = 0; t < parts.size(); ++t) {
    if (alphas[t].sign() < 0) return std::nullopt;
    total += alphas[t];
    if (alphas[t].is_zero()) continue;
    W = W + strategy_matrix(s, parts[t]).scaled(alphas[t]);
  }
  if (total != Rational(1)) return std::nullopt;
  auto cert = certify_rho_at_least_one(W, max_power);
  if (!cert) return std::nullopt;
  C1Witness w;
  for (size_t t = 0; t < parts.size(); ++t)
    if (!alphas[t].is_zero()) w.weights.push_back({parts[t], alphas[t]});
  w.rho_lower_bound = cert->lower;
  w.certificate = cert->kind;
  return w;
}

Verdict fails_with(C1Witness w) {
  Verdict v{VerdictKind::Fails};
  v.failure = std::move(w);
  return v;
}

// Lexicographic vertex scan; the first certified failure is the canonical
// witness. Returns nullopt when no vertex in [0, limit) certifies.
std::optional<C1Witness> scan_vertices(const LemmSystem& s, uint64_t limit, int jobs,
                                       int max_power) {
  std::optional<C1Witness> hit;
  blockwise_scan<std::optional<C1Witness>>(
      limit, jobs,
      [&](uint64_t idx) { return certify_vertex(s, strategy_at(s, idx), max_power); },
      [&](uint64_t, std::optional<C1Witness>& r) {
        if (r) {
          hit = std::move(r);
          return false;
        }
        return true;
      });
  return hit;
}

}  // namespace

Verdict check_c1_general(const LemmSystem& s, const C1Options& opt) {
  const uint64_t nstrat = strategy_count_capped(s, opt.vertex_budget + 1);
  const bool full_scan = nstrat <= opt.vertex_budget;
  const uint64_t scan_limit = full_scan ? nstrat : opt.vertex_budget;

  if (s.all_affine_nonneg()) {
    // Every vertex matrix is then nonnegative and the LP characterization
    // decides the whole convex hull exactly.
    Verdict lp = check_c1_nonneg(s);
    if (lp.kind == VerdictKind::Holds) return lp;
    if (auto w = scan_vertices(s, scan_limit, opt.jobs, opt.max_power))
      return fails_with(std::move(*w));
    if (full_scan)
      throw LemmError("check_c1_general: LP infeasible but no vertex certified; "
                      "elimination or simplex is broken");
    lp.note = "halting fails by LP infeasibility; no vertex witness within budget of " +
              std::to_string(opt.vertex_budget);
    return lp;  // Fails with the Farkas certificate attached
  }

  if (auto w = scan_vertices(s, scan_limit, opt.jobs, opt.max_power))
    return fails_with(std::move(*w));

  // Mixed-sign coefficients: no complete decision procedure is available, so
  // search convex combinations with exact dyadic weights, plus combinations
  // suggested by blowing-up strategy products. Samples are drawn up front so
  // certification can run in deterministic parallel blocks.
  SplitMix64 rng(opt.seed * 0x9e3779b97f4a7c15ULL + 1);
  const uint64_t index_space = strategy_count_capped(s, uint64_t(1) << 62);
  auto random_strategy = [&]() { return strategy_at(s, rng.below(index_space)); };

  struct Sample {
    std::vector<Strategy> parts;
    Vec alphas;  // empty for product samples
  };
  std::vector<Sample> combos(opt.sample_budget);
  for (auto& smp : combos) {
    int k = static_cast<int>(rng.range(2, 4));
    for (int t = 0; t < k; ++t) smp.parts.push_back(random_strategy());
    smp.alphas = dyadic_weights(rng, k);
  }
  const uint64_t product_trials = std::max<uint64_t>(1, opt.sample_budget / 4);
  std::vector<Sample> products(product_trials);
  for (auto& smp : products) {
    int depth = static_cast<int>(rng.range(2, std::max(2, opt.product_depth)));
    for (int t = 0; t < depth; ++t) smp.parts.push_back(random_strategy());
  }

  std::optional<C1Witness> hit;
  blockwise_scan<std::optional<C1Witness>>(
      combos.size(), opt.jobs,
      [&](uint64_t i) {
        return certify_combination(s, combos[i].parts, combos[i].alphas, opt.max_power);
      },
      [&](uint64_t, std::optional<C1Witness>& w) {
        if (w) hit = std::move(w);
        return !hit;
      });
  if (hit) return fails_with(std::move(*hit));

  uint64_t product_hits = 0;
  blockwise_scan<std::optional<C1Witness>>(
      products.size(), opt.jobs,
      [&](uint64_t i) -> std::optional<C1Witness> {
        const auto& parts = products[i].parts;
        Mat P;
        for (size_t t = 0; t < parts.size(); ++t) {
          Mat V = strategy_matrix(s, parts[t]);
          P = t == 0 ? V : P * V;
        }
        if (!certify_rho_at_least_one(P, opt.max_power)) return std::nullopt;
        // A blowing-up product is evidence, not a certificate: the witness
        // must be a single element of the convex hull.
        int depth = static_cast<int>(parts.size());
        Vec uniform(depth, Rational(1, depth));
        if (auto w = certify_combination(s, parts, uniform, opt.max_power)) return w;
        SplitMix64 local(opt.seed ^ (i * 0xd1342543de82ef95ULL + 17));
        for (int extra = 0; extra < 8; ++extra) {
          Vec alphas = dyadic_weights(local, depth);
          if (auto w = certify_combination(s, parts, alphas, opt.max_power)) return w;
        }
        C1Witness marker;  // blow-up seen, no hull witness certified
        marker.rho_lower_bound = -1;
        return marker;
      },
      [&](uint64_t, std::optional<C1Witness>& w) {
        if (w && w->rho_lower_bound.sign() < 0) {
          ++product_hits;
          return true;
        }
        if (w) hit = std::move(w);
        return !hit;
      });
  if (hit) return fails_with(std::move(*hit));

  Verdict v{VerdictKind::Unknown};
  v.note = "no certified failure; scanned " + std::to_string(scan_limit) +
           (full_scan ? " (all)" : "") + " vertices, " + std::to_string(combos.size()) +
           " sampled combinations, " + std::to_string(products.size()) + " products (" +
           std::to_string(product_hits) +
           " blowing up without a certified hull witness); mixed-sign coefficients admit "
           "no exact check here";
  return v;
}

ConditionReport check_conditions(const LemmSystem& s, const C1Options& opt,
                                 const ConditionSelection& sel) {
  ConditionReport r;
  if (sel.c2) r.c2 = check_c2(s);
  if (sel.c3) r.c3 = check_c3(s);
  if (sel.c4) r.c4 = check_c4(s);
  if (sel.c1) r.c1 = check_c1_general(s, opt);
  return r;
}

ordered_json verdict_to_json(const Verdict& v) {
  ordered_json j;
  j["verdict"] = to_string(v.kind);
  if (v.kind == VerdictKind::Fails || v.witness_x || v.failure) {
    ordered_json w = ordered_json::object();
    if (v.fail_row > 0) {
      w["row"] = v.fail_row;
      if (v.fail_entry > 0) w["entry"] = v.fail_entry;
      if (v.fail_value) w["value"] = v.fail_value->str();
    }
    if (v.one_type_counts) {
      w["n1"] = v.one_type_counts->first;
      w["n2"] = v.one_type_counts->second;
    }
    if (v.witness_x) w["x"] = vector_to_json(*v.witness_x);
    if (v.failure) {
      ordered_json combo = ordered_json::array();
      for (const auto& sw : v.failure->weights) {
        ordered_json entry;
        entry["strategy"] = sw.strategy.choice;
        entry["alpha"] = sw.alpha.str();
        combo.push_back(std::move(entry));
      }
      w["combination"] = std::move(combo);
      w["rho_lower_bound"] = v.failure->rho_lower_bound.str();
      w["certificate"] = v.failure->certificate;
    }
    if (v.farkas && !v.failure) w["lp_infeasibility"] = vector_to_json(*v.farkas);
    if (!w.empty()) j["witness"] = std::move(w);
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

ordered_json report_to_json(const ConditionReport& r, const ConditionSelection& sel) {
  ordered_json j;
  if (sel.c1) j["c1"] = verdict_to_json(r.c1);
  if (sel.c2) j["c2"] = verdict_to_json(r.c2);
  if (sel.c3) j["c3"] = verdict_to_json(r.c3);
  if (sel.c4) j["c4"] = verdict_to_json(r.c4);
  return j;
}

}  // namespace lemm
