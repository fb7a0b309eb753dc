#pragma once

#include <string>

#include <json.hpp>

#include "lemm/system.hpp"

namespace lemm {

using ordered_json = nlohmann::ordered_json;

/// Accepts a JSON integer or a string holding "p", "p/q", or an exact decimal.
Rational rational_from_json(const nlohmann::json& j);
ordered_json rational_to_json(const Rational& r);
Vec vector_from_json(const nlohmann::json& j);
ordered_json vector_to_json(const Vec& v);

/// Parses an instance document:
///   {"n1": int, "n2": int, "n": int,
///    "choices": [[int, ...], ...],
///    "affine": [{"q": [...], "b": ...}, ...]}
/// Validates every structural invariant; throws ParseError with row context.
LemmSystem parse_system(const std::string& text);
LemmSystem parse_system_file(const std::string& path);

ordered_json system_to_json(const LemmSystem& s);
std::string serialize(const LemmSystem& s);

}  // namespace lemm
