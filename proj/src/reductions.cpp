#include "lemm/reductions.hpp"

#include <sstream>

#include <json.hpp>

#include "lemm/expression.hpp"
#include "lemm/io.hpp"

namespace lemm {

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula f;
  std::istringstream in(text);
  std::string tok;
  bool header = false;
  int expected_clauses = -1;
  std::vector<int> clause;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      if (!(in >> fmt >> f.num_vars >> expected_clauses) || fmt != "cnf")
        throw ParseError("malformed DIMACS header");
      header = true;
      continue;
    }
    int lit;
    try {
      lit = std::stoi(tok);
    } catch (...) {
      throw ParseError("unexpected token in DIMACS input: '" + tok + "'");
    }
    if (!header) throw ParseError("DIMACS clause before p-line");
    if (lit == 0) {
      if (clause.empty()) throw ParseError("empty clause in DIMACS input");
      f.clauses.push_back(std::move(clause));
      clause.clear();
    } else {
      if (std::abs(lit) > f.num_vars)
        throw ParseError("literal " + std::to_string(lit) + " out of range");
      clause.push_back(lit);
    }
  }
  if (!header) throw ParseError("missing DIMACS p-line");
  if (!clause.empty()) throw ParseError("unterminated clause in DIMACS input");
  if (expected_clauses >= 0 && static_cast<int>(f.clauses.size()) != expected_clauses)
    throw ParseError("clause count does not match p-line");
  return f;
}

LemmSystem partition_to_lemm(const std::vector<long long>& a) {
  if (a.empty()) throw LemmError("partition_to_lemm: empty input");
  for (long long v : a)
    if (v < 1) throw LemmError("partition_to_lemm: entries must be positive integers");
  const int m = static_cast<int>(a.size());
  LemmSystem s;
  s.n1 = m;
  s.n2 = 0;
  s.n = 2 * m + 2;
  s.offsets.assign(s.n, Rational(0));
  for (int i = 1; i <= m; ++i) s.choices.push_back({i + m, 2 * m + 1});
  for (int k = m + 1; k <= 2 * m; ++k) {
    Vec q(s.n, Rational(0));
    q[k - m - 1] = 2;
    s.affine_rows.push_back(std::move(q));
    s.offsets[k - 1] = 1;
  }
  s.affine_rows.emplace_back(s.n, Rational(0));  // x_{2m+1} = 1
  s.offsets[2 * m] = 1;
  Vec last(s.n, Rational(0));
  for (int j = 0; j < m; ++j) last[j] = Rational(static_cast<long>(a[j]));
  last[2 * m + 1] = 1;  // self-loop pins sum a_j x_j to zero
  s.affine_rows.push_back(std::move(last));
  s.validate_and_normalize();
  return s;
}

LemmSystem normalize_sum_to_1(const LemmSystem& in) {
  LemmSystem s;
  s.n1 = in.n1;
  s.n2 = in.n2;
  s.n = in.n + 1;
  s.choices = in.choices;
  s.offsets.assign(s.n, Rational(0));
  for (int k = in.num_choice_vars() + 1; k <= in.n; ++k) {
    const Vec& q = in.affine_row(k);
    Vec row(s.n, Rational(0));
    Rational sum = in.offset(k);
    for (int j = 0; j < in.n; ++j) {
      row[j] = q[j];
      sum += q[j];
    }
    row[in.n] = -sum;
    s.affine_rows.push_back(std::move(row));
    s.offsets[k - 1] = in.offset(k);
  }
  s.affine_rows.emplace_back(s.n, Rational(0));  // dummy x_{n+1} = 0
  s.validate_and_normalize();
  return s;
}

LemmSystem to_min_only(const LemmSystem& in) {
  const int n = in.n, n1 = in.n1;
  LemmSystem s;
  s.n1 = in.n1 + in.n2;
  s.n2 = 0;
  s.n = 3 * n + 1;
  s.offsets.assign(s.n, Rational(0));
  for (int i = 1; i <= in.num_choice_vars(); ++i) {
    std::vector<int> J;
    for (int l : in.choice_set(i)) {
      bool min_target = l <= n1;
      // min variables keep positive copies of min targets and negated copies
      // of the rest; max variables are mirrored (their negation turns the max
      // into a min over negated values)
      if (in.is_min_var(i))
        J.push_back(min_target ? l + 2 * n : l + n);
      else
        J.push_back(min_target ? l + n : l + 2 * n);
    }
    s.choices.push_back(std::move(J));
  }
  for (int k = in.num_choice_vars() + 1; k <= n; ++k) {
    const Vec& q = in.affine_row(k);
    Vec row(s.n, Rational(0));
    Rational sum(0);
    for (int j = 1; j <= n; ++j) {
      int target = j <= n1 ? n + j : 2 * n + j;
      row[target - 1] = q[j - 1];
      sum += q[j - 1];
    }
    row[3 * n] = -sum + in.offset(k);
    s.affine_rows.push_back(std::move(row));
    s.offsets[k - 1] = -in.offset(k);
  }
  for (int l = n + 1; l <= 2 * n; ++l) {
    Vec row(s.n, Rational(0));
    row[l - n - 1] = -1;
    s.affine_rows.push_back(std::move(row));
  }
  for (int m = 2 * n + 1; m <= 3 * n; ++m) {
    Vec row(s.n, Rational(0));
    row[m - 2 * n - 1] = 1;
    s.affine_rows.push_back(std::move(row));
  }
  s.affine_rows.emplace_back(s.n, Rational(0));  // dummy x_{3n+1} = 0
  s.validate_and_normalize();
  return s;
}

LemmSystem sat_to_condition_instance(const CnfFormula& f) {
  const int r = f.num_vars;
  const int m = static_cast<int>(f.clauses.size());
  for (const auto& c : f.clauses) {
    if (c.empty()) throw LemmError("sat_to_condition_instance: empty clause");
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > r)
        throw LemmError("sat_to_condition_instance: literal out of range");
  }
  LemmSystem s;
  s.n1 = 0;
  s.n2 = m + r;
  s.n = m + 2 * r + 2;
  s.offsets.assign(s.n, Rational(0));
  for (const auto& c : f.clauses) {
    std::vector<int> J;
    for (int lit : c) J.push_back(lit > 0 ? m + lit : m + r - lit);
    s.choices.push_back(std::move(J));
  }
  for (int l = 1; l <= r; ++l) s.choices.push_back({m + 2 * r + 1, m + 2 * r + 2});
  for (int k = m + r + 1; k <= m + 2 * r; ++k) {
    Vec q(s.n, Rational(0));
    q[k - r - 1] = -1;  // negated copy of the assignment variable
    s.affine_rows.push_back(std::move(q));
  }
  Vec avg(s.n, Rational(0));
  for (int i = 0; i < m; ++i) avg[i] = Rational(1, m + 1);
  avg[m + 2 * r] = Rational(1, m + 1);
  s.affine_rows.push_back(std::move(avg));
  Vec neg(s.n, Rational(0));
  neg[m + 2 * r] = -1;
  s.affine_rows.push_back(std::move(neg));
  s.validate_and_normalize();
  return s;
}

MlpEncoding mlp_to_lemm(const Mlp& mlp) {
  if (mlp.layers.empty()) throw LemmError("mlp_to_lemm: no layers");
  const int d = mlp.layers.front().weights.cols();
  int prev_dim = d;
  for (size_t t = 0; t < mlp.layers.size(); ++t) {
    const MlpLayer& L = mlp.layers[t];
    if (L.weights.cols() != prev_dim || static_cast<int>(L.offsets.size()) != L.weights.rows())
      throw LemmError("mlp_to_lemm: dimension mismatch at layer " + std::to_string(t + 1));
    prev_dim = L.weights.rows();
  }
  if (static_cast<int>(mlp.output_row.size()) != prev_dim)
    throw LemmError("mlp_to_lemm: output row does not match final layer");

  std::vector<std::pair<int, Expr>> eqs;
  int next_id = 1;
  std::vector<int> inputs, prev;
  for (int j = 0; j < d; ++j) {
    int id = next_id++;
    inputs.push_back(id);
    // x = max{0, min{x, 1}} keeps inputs free inside the unit box
    eqs.emplace_back(id, Expr::max({Expr::constant(0),
                                    Expr::min({Expr::var(id), Expr::constant(1)})}));
  }
  prev = inputs;
  for (const MlpLayer& L : mlp.layers) {
    std::vector<int> out;
    for (int i = 0; i < L.weights.rows(); ++i) {
      Vec coeffs;
      std::vector<Expr> children;
      for (int j = 0; j < L.weights.cols(); ++j) {
        coeffs.push_back(L.weights.at(i, j));
        children.push_back(Expr::var(prev[j]));
      }
      int id = next_id++;
      out.push_back(id);
      eqs.emplace_back(id, Expr::max({Expr::affine(std::move(coeffs), L.offsets[i],
                                                   std::move(children)),
                                      Expr::constant(0)}));
    }
    prev = std::move(out);
  }
  std::vector<Expr> children;
  for (int id : prev) children.push_back(Expr::var(id));
  int out_id = next_id++;
  eqs.emplace_back(out_id, Expr::affine(mlp.output_row, mlp.output_offset, std::move(children)));

  FlattenResult flat = flatten(eqs);
  MlpEncoding enc;
  enc.system = std::move(flat.system);
  for (size_t t = 0; t < eqs.size(); ++t) {
    int orig = eqs[t].first;
    if (orig == out_id) enc.output_var = flat.original_to_system[t];
    for (size_t j = 0; j < inputs.size(); ++j)
      if (orig == inputs[j]) enc.input_vars.push_back(flat.original_to_system[t]);
  }
  return enc;
}

Mlp parse_mlp_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  nlohmann::json layers = doc.is_array() ? doc : doc.value("layers", nlohmann::json());
  if (!layers.is_array() || layers.empty())
    throw ParseError("MLP document needs a nonempty layer array");
  Mlp mlp;
  for (const auto& L : layers) {
    if (!L.is_object() || !L.contains("W") || !L.contains("b"))
      throw ParseError("each layer must be {\"W\": [[...]], \"b\": [...]}");
    const auto& W = L["W"];
    if (!W.is_array() || W.empty()) throw ParseError("layer W must be a nonempty matrix");
    MlpLayer layer;
    int cols = -1;
    layer.weights = Mat(static_cast<int>(W.size()),
                        static_cast<int>(W[0].is_array() ? W[0].size() : 0));
    for (size_t i = 0; i < W.size(); ++i) {
      Vec row = vector_from_json(W[i]);
      if (cols < 0) cols = static_cast<int>(row.size());
      if (static_cast<int>(row.size()) != cols || cols == 0)
        throw ParseError("ragged or empty layer matrix");
      for (int j = 0; j < cols; ++j) layer.weights.at(static_cast<int>(i), j) = row[j];
    }
    layer.offsets = vector_from_json(L["b"]);
    mlp.layers.push_back(std::move(layer));
  }
  if (doc.is_object() && doc.contains("output_row")) {
    mlp.output_row = vector_from_json(doc["output_row"]);
    if (doc.contains("output_offset"))
      mlp.output_offset = rational_from_json(doc["output_offset"]);
  } else {
    int last = mlp.layers.back().weights.rows();
    if (last != 1)
      throw ParseError("output_row required when the final layer has more than one neuron");
    mlp.output_row = Vec{Rational(1)};
  }
  return mlp;
}

}  // namespace lemm
