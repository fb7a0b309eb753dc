#include "lemm/io.hpp"

#include <fstream>
#include <sstream>

namespace lemm {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<int64_t>()));
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  throw ParseError("expected rational (integer or \"p/q\" string), got " + j.dump());
}

ordered_json rational_to_json(const Rational& r) { return ordered_json(r.str()); }

Vec vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected array of rationals, got " + j.dump());
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

ordered_json vector_to_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

LemmSystem parse_system(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
  for (const char* key : {"n1", "n2", "n", "choices", "affine"})
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");

  LemmSystem s;
  try {
    s.n1 = doc["n1"].get<int>();
    s.n2 = doc["n2"].get<int>();
    s.n = doc["n"].get<int>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("n1, n2, n must be integers");
  }
  if (!doc["choices"].is_array()) throw ParseError("\"choices\" must be an array");
  if (!doc["affine"].is_array()) throw ParseError("\"affine\" must be an array");
  // consistency of the declared sizes before any allocation sized by them
  if (s.n1 < 0 || s.n2 < 0 || s.n < 0) throw ParseError("variable counts must be nonnegative");
  if (static_cast<size_t>(s.n1) + static_cast<size_t>(s.n2) != doc["choices"].size())
    throw ParseError("expected " + std::to_string(s.n1 + s.n2) + " choice sets, got " +
                     std::to_string(doc["choices"].size()));
  if (static_cast<size_t>(s.n) != doc["choices"].size() + doc["affine"].size())
    throw ParseError("n = " + std::to_string(s.n) + " does not match " +
                     std::to_string(doc["choices"].size() + doc["affine"].size()) +
                     " equation rows");
  for (const auto& J : doc["choices"]) {
    if (!J.is_array()) throw ParseError("each choice set must be an array of indices");
    std::vector<int> set;
    for (const auto& l : J) {
      if (!l.is_number_integer()) throw ParseError("choice indices must be integers");
      set.push_back(l.get<int>());
    }
    s.choices.push_back(std::move(set));
  }
  s.offsets.assign(s.n, Rational(0));
  int k = s.n1 + s.n2 + 1;
  for (const auto& row : doc["affine"]) {
    if (!row.is_object() || !row.contains("q") || !row.contains("b"))
      throw ParseError("each affine row must be {\"q\": [...], \"b\": ...} (row " +
                       std::to_string(k) + ")");
    try {
      s.affine_rows.push_back(vector_from_json(row["q"]));
      if (k >= 1 && k <= s.n) s.offsets[k - 1] = rational_from_json(row["b"]);
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()) + " (affine row " + std::to_string(k) + ")");
    }
    ++k;
  }
  s.validate_and_normalize();
  return s;
}

LemmSystem parse_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

ordered_json system_to_json(const LemmSystem& s) {
  ordered_json doc;
  doc["n1"] = s.n1;
  doc["n2"] = s.n2;
  doc["n"] = s.n;
  ordered_json choices = ordered_json::array();
  for (const auto& J : s.choices) choices.push_back(J);
  doc["choices"] = std::move(choices);
  ordered_json affine = ordered_json::array();
  for (int k = s.num_choice_vars() + 1; k <= s.n; ++k) {
    ordered_json row;
    row["q"] = vector_to_json(s.affine_row(k));
    row["b"] = s.offset(k).str();
    affine.push_back(std::move(row));
  }
  doc["affine"] = std::move(affine);
  return doc;
}

std::string serialize(const LemmSystem& s) { return system_to_json(s).dump(2) + "\n"; }

}  // namespace lemm
