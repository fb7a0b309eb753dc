// Command-line front end: check / solve / decide / verify / reduce / bench.
//
// Exit codes: 0 completed, 2 unknown verdict, 3 input error, 4 budget
// exceeded. Output documents go to stdout and are byte-stable for fixed
// inputs, flags, and seed; diagnostics go to stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lemm/conditions.hpp"
#include "lemm/io.hpp"
#include "lemm/reductions.hpp"
#include "lemm/solvers.hpp"

using namespace lemm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;
constexpr int kExitBudget = 4;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

uint64_t strategy_budget() {
  if (const char* env = std::getenv("LEMM_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ParseError("LEMM_BUDGET must be a positive integer");
    }
  }
  return uint64_t(1) << 20;
}

struct CommonOpts {
  uint64_t seed = 0;
  int jobs = 1;
};

struct CheckOpts : CommonOpts {
  std::string file;
  std::string conditions = "c1,c2,c3,c4";
  uint64_t sample_budget = 1000;
  int product_depth = 8;
};

struct SolveOpts : CommonOpts {
  std::string file;
  std::string method = "auto";
  std::string epsilon = "1/1000000000";
  uint64_t max_iters = 1000000;
};

struct DecideOpts : CommonOpts {
  std::string file;
  int index = 1;
  std::string beta;
};

struct VerifyOpts {
  std::string file;
  std::string x_json;
};

struct ReduceOpts {
  std::string kind;
  std::string input;
  std::string output;
};

C1Options c1_options(const CommonOpts& c, uint64_t sample_budget = 1000,
                     int product_depth = 8) {
  C1Options opt;
  opt.sample_budget = sample_budget;
  opt.product_depth = product_depth;
  opt.seed = c.seed;
  opt.jobs = c.jobs;
  return opt;
}

int run_check(const CheckOpts& o) {
  LemmSystem s = parse_system(read_input(o.file));
  ConditionSelection sel{false, false, false, false};
  std::stringstream ss(o.conditions);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "c1") sel.c1 = true;
    else if (tok == "c2") sel.c2 = true;
    else if (tok == "c3") sel.c3 = true;
    else if (tok == "c4") sel.c4 = true;
    else throw ParseError("unknown condition '" + tok + "'");
  }
  ConditionReport r = check_conditions(s, c1_options(o, o.sample_budget, o.product_depth), sel);
  emit(report_to_json(r, sel));
  bool unknown = (sel.c1 && r.c1.kind == VerdictKind::Unknown) ||
                 (sel.c2 && r.c2.kind == VerdictKind::Unknown) ||
                 (sel.c3 && r.c3.kind == VerdictKind::Unknown) ||
                 (sel.c4 && r.c4.kind == VerdictKind::Unknown);
  return unknown ? kExitUnknown : kExitOk;
}

ordered_json strategy_json(const Strategy& st) { return ordered_json(st.choice); }

int run_solve(const SolveOpts& o) {
  LemmSystem s = parse_system(read_input(o.file));
  const uint64_t budget = strategy_budget();

  std::string method = o.method;
  if (method == "auto") {
    ConditionReport profile = check_conditions(s, c1_options(o));
    if (profile.c1.kind == VerdictKind::Holds && profile.c2.kind == VerdictKind::Holds &&
        profile.c4.kind == VerdictKind::Holds)
      method = "lp";
    else if (profile.c1.kind == VerdictKind::Holds)
      method = "enumerate-unique";
    else
      method = "enumerate";
  }

  ordered_json out;
  if (method == "lp") {
    Solution sol = solve_lp_one_type(s);
    out["status"] = "unique";
    out["values"] = vector_to_json(sol.values);
    out["method"] = "lp";
    emit(out);
    return kExitOk;
  }
  if (method == "vi") {
    Rational eps = Rational::from_string(o.epsilon);
    ValueIterationResult r = solve_value_iteration(s, o.max_iters, eps);
    out["status"] = r.converged ? "approx" : "no_convergence";
    out["values"] = vector_to_json(r.values);
    out["error_bound"] = r.error_bound.str();
    out["iterations"] = r.iterations;
    out["method"] = "vi";
    emit(out);
    return r.converged ? kExitOk : kExitUnknown;
  }
  if (method == "enumerate" || method == "enumerate-unique") {
    EnumerateOptions opt;
    opt.budget = budget;
    opt.jobs = o.jobs;
    opt.early_exit_unique = method == "enumerate-unique";
    SolveOutcome r = solve_enumerate(s, opt);
    switch (r.kind) {
      case SolveOutcome::Kind::Unique:
        out["status"] = "unique";
        out["values"] = vector_to_json(r.solution.values);
        out["strategy"] = strategy_json(*r.witness);
        break;
      case SolveOutcome::Kind::NoSolution:
        out["status"] = "no_solution";
        break;
      case SolveOutcome::Kind::Multiple: {
        out["status"] = "multiple";
        ordered_json sols = ordered_json::array();
        for (const auto& v : r.solutions) sols.push_back(vector_to_json(v));
        out["solutions"] = std::move(sols);
        break;
      }
    }
    out["method"] = "enumerate";
    emit(out);
    return kExitOk;
  }
  throw ParseError("unknown solve method '" + o.method + "'");
}

int run_decide(const DecideOpts& o) {
  LemmSystem s = parse_system(read_input(o.file));
  DecisionQuery q{o.index, Rational::from_string(o.beta)};
  ConditionReport profile = check_conditions(s, c1_options(o));
  DecideOptions opt;
  opt.budget = strategy_budget();
  opt.jobs = o.jobs;
  DecideResult r = decide(s, q, profile, opt);
  ordered_json out;
  out["answer"] = to_string(r.answer);
  if (r.witness) out["witness"] = vector_to_json(*r.witness);
  if (!r.note.empty()) out["note"] = r.note;
  emit(out);
  if (r.answer != Answer::Unknown) return kExitOk;
  return r.note.find("budget") != std::string::npos ? kExitBudget : kExitUnknown;
}

int run_verify(const VerifyOpts& o) {
  LemmSystem s = parse_system(read_input(o.file));
  nlohmann::json xj;
  try {
    xj = nlohmann::json::parse(o.x_json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed --x vector: ") + e.what());
  }
  Vec x = vector_from_json(xj);
  if (static_cast<int>(x.size()) != s.n)
    throw ParseError("--x vector must have length " + std::to_string(s.n));
  std::cout << (verify_certificate(s, x) ? "true" : "false") << "\n";
  return kExitOk;
}

int run_reduce(const ReduceOpts& o) {
  std::string text = read_input(o.input);
  LemmSystem out;
  ordered_json meta;
  if (o.kind == "partition") {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed integer array: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("partition input must be a JSON integer array");
    std::vector<long long> a;
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw ParseError("partition entries must be integers");
      a.push_back(v.get<long long>());
    }
    out = partition_to_lemm(a);
  } else if (o.kind == "sumto1") {
    out = normalize_sum_to_1(parse_system(text));
  } else if (o.kind == "minonly") {
    LemmSystem in = parse_system(text);
    Verdict c1 = check_c1_general(in);
    if (c1.kind == VerdictKind::Fails)
      std::cerr << "lemm: warning: input fails the halting condition; the min-only "
                   "construction is only proven faithful for halting systems\n";
    out = to_min_only(in);
  } else if (o.kind == "sat") {
    CnfFormula f = parse_dimacs(text);
    if (f.clauses.empty())
      std::cerr << "lemm: note: empty clause list; the halting correspondence claim "
                   "does not apply to this instance\n";
    out = sat_to_condition_instance(f);
  } else if (o.kind == "mlp") {
    MlpEncoding enc = mlp_to_lemm(parse_mlp_json(text));
    out = std::move(enc.system);
    meta["output_var"] = enc.output_var;
    meta["input_vars"] = enc.input_vars;
  } else {
    throw ParseError("unknown reduction '" + o.kind +
                     "' (expected partition|sumto1|minonly|sat|mlp)");
  }
  std::string doc = serialize(out);
  if (o.output.empty()) {
    std::cout << doc;
    if (!meta.empty()) std::cerr << meta.dump(2) << "\n";
  } else {
    std::ofstream f(o.output);
    if (!f) throw ParseError("cannot write file: " + o.output);
    f << doc;
    if (!meta.empty()) {
      meta["file"] = o.output;
      emit(meta);
    }
  }
  return kExitOk;
}

int run_bench(const CheckOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  LemmSystem s = parse_system(read_input(o.file));
  ordered_json out;
  out["n"] = s.n;
  out["n1"] = s.n1;
  out["n2"] = s.n2;
  uint64_t cap = uint64_t(1) << 62;
  uint64_t count = strategy_count_capped(s, cap);
  out["strategies"] = count >= cap ? ordered_json(">=2^62") : ordered_json(count);
  ConditionReport r = check_conditions(s, c1_options(o, o.sample_budget, o.product_depth));
  out["conditions"] = report_to_json(r);
  auto t1 = std::chrono::steady_clock::now();
  emit(out);
  std::cerr << "bench: conditions checked in "
            << std::chrono::duration<double>(t1 - t0).count() << "s\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for systems of linear equations with min and max operators"};
  app.require_subcommand(1);

  CheckOpts check_o;
  auto* check = app.add_subcommand("check", "decide conditions C1-C4 with witnesses");
  check->add_option("file", check_o.file, "instance document (- for stdin)")->required();
  check->add_option("--conditions", check_o.conditions, "comma list from c1,c2,c3,c4");
  check->add_option("--sample-budget", check_o.sample_budget, "combination samples for C1");
  check->add_option("--product-depth", check_o.product_depth, "strategy-product depth for C1");
  check->add_option("--seed", check_o.seed, "sampling seed");
  check->add_option("--jobs", check_o.jobs, "parallel search width");

  SolveOpts solve_o;
  auto* solve = app.add_subcommand("solve", "compute the exact solution(s)");
  solve->add_option("file", solve_o.file, "instance document (- for stdin)")->required();
  solve->add_option("--method", solve_o.method, "auto|enumerate|lp|vi");
  solve->add_option("--epsilon", solve_o.epsilon, "vi accuracy target, rational");
  solve->add_option("--max-iters", solve_o.max_iters, "vi iteration cap");
  solve->add_option("--seed", solve_o.seed, "sampling seed (auto routing)");
  solve->add_option("--jobs", solve_o.jobs, "parallel search width");

  DecideOpts decide_o;
  auto* dec = app.add_subcommand("decide", "is there a feasible x with x_i < beta?");
  dec->add_option("file", decide_o.file, "instance document (- for stdin)")->required();
  dec->add_option("--index", decide_o.index, "1-based variable index")->required();
  dec->add_option("--beta", decide_o.beta, "strict threshold, rational")->required();
  dec->add_option("--seed", decide_o.seed, "sampling seed");
  dec->add_option("--jobs", decide_o.jobs, "parallel search width");

  VerifyOpts verify_o;
  auto* ver = app.add_subcommand("verify", "check a candidate solution exactly");
  ver->add_option("file", verify_o.file, "instance document (- for stdin)")->required();
  ver->add_option("--x", verify_o.x_json, "candidate as a JSON array of rationals")->required();

  ReduceOpts reduce_o;
  auto* red = app.add_subcommand("reduce", "materialize a reduction as an instance document");
  red->add_option("kind", reduce_o.kind, "partition|sumto1|minonly|sat|mlp")->required();
  red->add_option("input", reduce_o.input, "input document (- for stdin)")->required();
  red->add_option("-o,--output", reduce_o.output, "write the instance here");

  CheckOpts bench_o;
  auto* bench = app.add_subcommand("bench", "instance statistics and condition timings");
  bench->add_option("file", bench_o.file, "instance document (- for stdin)")->required();
  bench->add_option("--sample-budget", bench_o.sample_budget, "combination samples for C1");
  bench->add_option("--product-depth", bench_o.product_depth, "strategy-product depth");
  bench->add_option("--seed", bench_o.seed, "sampling seed");
  bench->add_option("--jobs", bench_o.jobs, "parallel search width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*check) return run_check(check_o);
    if (*solve) return run_solve(solve_o);
    if (*dec) return run_decide(decide_o);
    if (*ver) return run_verify(verify_o);
    if (*red) return run_reduce(reduce_o);
    if (*bench) return run_bench(bench_o);
  } catch (const BudgetExceeded& e) {
    std::cerr << "lemm: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lemm: " << e.what() << "\n";
    return kExitInputError;
  } catch (const LemmError& e) {
    std::cerr << "lemm: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "lemm: internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitInputError;
}
