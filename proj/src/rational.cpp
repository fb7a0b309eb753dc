#include "lemm/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace lemm {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::from_string(const std::string& input) {
  std::string s = input;
  // trim
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw std::invalid_argument("empty rational literal");
  s = s.substr(b, e - b + 1);

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    s = s.substr(1);
  }
  if (s.empty()) throw std::invalid_argument("malformed rational literal: '" + input + "'");

  mpq_class q;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational literal: '" + input + "'");
    mpz_class d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + input + "'");
    q = mpq_class(mpz_class(num), d);
  } else if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (fp.empty()) fp = "0";
    if (!all_digits(ip) || !all_digits(fp))
      throw std::invalid_argument("malformed rational literal: '" + input + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    q = mpq_class(mpz_class(ip) * scale + mpz_class(fp), scale);
  } else {
    if (!all_digits(s))
      throw std::invalid_argument("malformed rational literal: '" + input + "'");
    q = mpq_class(mpz_class(s));
  }
  q.canonicalize();
  if (neg) q = -q;
  return Rational(q);
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational Rational::pow2(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return Rational(mpq_class(1, p));
}

Rational Rational::round_dyadic(const Rational& r, long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k));
  mpz_class scaled_num = r.raw().get_num() * p;
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), r.raw().get_den().get_mpz_t());
  return Rational(mpq_class(q, p));
}

Rational max_abs(const Vec& v) {
  Rational m = 0;
  for (const auto& x : v) {
    Rational a = x.abs();
    if (a > m) m = a;
  }
  return m;
}

}  // namespace lemm
