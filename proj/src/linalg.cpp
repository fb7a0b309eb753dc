#include "lemm/linalg.hpp"

#include <cassert>
#include <iostream>

namespace lemm {

namespace {

// Fraction-free (Bareiss) elimination over integers. The input rows are the
// rational rows of [A | aug] scaled row-wise to integers; scaling does not
// change the solution set. Pivot selection is deterministic: columns left to
// right, first row with a nonzero entry.
struct Echelon {
  std::vector<std::vector<mpz_class>> m;
  int ncoef = 0;                           // coefficient columns
  std::vector<std::pair<int, int>> pivots; // (row, col), in elimination order
  std::vector<int> free_cols;
};

Echelon bareiss_eliminate(const Mat& A, const std::vector<Vec>& aug) {
  const int n = A.rows(), w = A.cols();
  const int naug = static_cast<int>(aug.size());
  Echelon e;
  e.ncoef = w;
  e.m.assign(n, std::vector<mpz_class>(w + naug));
  for (int i = 0; i < n; ++i) {
    mpz_class lcm = 1;
    auto fold = [&](const Rational& r) {
      mpz_class d = r.denominator();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    };
    for (int j = 0; j < w; ++j) fold(A.at(i, j));
    for (int t = 0; t < naug; ++t) fold(aug[t][i]);
    auto scale = [&](const Rational& r) -> mpz_class {
      return mpz_class(r.numerator() * (lcm / r.denominator()));
    };
    for (int j = 0; j < w; ++j) e.m[i][j] = scale(A.at(i, j));
    for (int t = 0; t < naug; ++t) e.m[i][w + t] = scale(aug[t][i]);
  }

  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < w && r < n; ++c) {
    int pr = -1;
    for (int i = r; i < n; ++i)
      if (e.m[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;  // free column
    std::swap(e.m[r], e.m[pr]);
    for (int i = r + 1; i < n; ++i) {
      for (int j = c + 1; j < w + naug; ++j) {
        mpz_class num = e.m[r][c] * e.m[i][j] - e.m[i][c] * e.m[r][j];
        mpz_class q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        assert(rem == 0);  // Bareiss divisions are exact
        e.m[i][j] = q;
      }
      e.m[i][c] = 0;
    }
    prev = e.m[r][c];
    e.pivots.emplace_back(r, c);
    ++r;
  }
  std::vector<bool> is_pivot(w, false);
  for (auto [row, col] : e.pivots) is_pivot[col] = true;
  for (int c = 0; c < w; ++c)
    if (!is_pivot[c]) e.free_cols.push_back(c);
  return e;
}

// Back-substitution in exact rationals from the echelon form. `values` must
// be preset on the free columns; fills the pivot columns.
Vec back_substitute(const Echelon& e, int aug_col, Vec values) {
  for (int p = static_cast<int>(e.pivots.size()) - 1; p >= 0; --p) {
    auto [r, c] = e.pivots[p];
    Rational acc(Rational(mpq_class(e.m[r][e.ncoef + aug_col])));
    for (int j = c + 1; j < e.ncoef; ++j)
      if (e.m[r][j] != 0) acc -= Rational(mpq_class(e.m[r][j])) * values[j];
    values[c] = acc / Rational(mpq_class(e.m[r][c]));
  }
  return values;
}

Vec kernel_vector(const Echelon& e, int free_col) {
  Vec v(e.ncoef, Rational(0));
  v[free_col] = 1;
  for (int p = static_cast<int>(e.pivots.size()) - 1; p >= 0; --p) {
    auto [r, c] = e.pivots[p];
    Rational acc(0);
    for (int j = c + 1; j < e.ncoef; ++j)
      if (e.m[r][j] != 0) acc -= Rational(mpq_class(e.m[r][j])) * v[j];
    v[c] = acc / Rational(mpq_class(e.m[r][c]));
  }
  return v;
}

bool consistent(const Echelon& e, int aug_col) {
  int rank = static_cast<int>(e.pivots.size());
  for (size_t i = rank; i < e.m.size(); ++i)
    if (e.m[i][e.ncoef + aug_col] != 0) return false;
  return true;
}

}  // namespace

LinearSolveResult solve_square(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || static_cast<int>(b.size()) != A.rows())
    throw LemmError("solve_square: dimension mismatch");
  const int n = A.rows();
  Echelon e = bareiss_eliminate(A, {b});
  LinearSolveResult res;
  if (static_cast<int>(e.pivots.size()) == n) {
    res.unique = true;
    res.x = back_substitute(e, 0, Vec(n, Rational(0)));
    return res;
  }
  for (int c : e.free_cols) res.kernel.push_back(kernel_vector(e, c));
  if (consistent(e, 0)) {
    Vec p = back_substitute(e, 0, Vec(n, Rational(0)));  // free variables at zero
    res.particular = std::move(p);
  }
  return res;
}

LinearSolveResult solve_linear(const Mat& Q, const Vec& b) {
  if (Q.rows() != Q.cols()) throw LemmError("solve_linear: Q must be square");
  const int n = Q.rows();
  Mat A = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) -= Q.at(i, j);
  LinearSolveResult res = solve_square(A, b);
  if (res.unique) {
    // re-substitution check: (I - Q) x - b must vanish exactly
    Vec lhs = A * res.x;
    for (int i = 0; i < n; ++i)
      if (lhs[i] != b[i]) throw LemmError("solve_linear: internal re-substitution failure");
  }
  return res;
}

std::optional<Mat> inverse_nonneg(const Mat& Q) {
  if (Q.rows() != Q.cols()) throw LemmError("inverse_nonneg: Q must be square");
  if (!Q.is_nonneg()) throw LemmError("inverse_nonneg: negative input entry");
  const int n = Q.rows();
  Mat A = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) -= Q.at(i, j);
  std::vector<Vec> cols(n, Vec(n, Rational(0)));
  for (int j = 0; j < n; ++j) cols[j][j] = 1;
  Echelon e = bareiss_eliminate(A, cols);
  if (static_cast<int>(e.pivots.size()) < n) return std::nullopt;
  Mat inv(n, n);
  bool negative = false;
  for (int j = 0; j < n; ++j) {
    Vec col = back_substitute(e, j, Vec(n, Rational(0)));
    for (int i = 0; i < n; ++i) {
      if (col[i].sign() < 0) negative = true;
      inv.at(i, j) = std::move(col[i]);
    }
  }
  if (negative) {
    // (I-Q)^-1 with a negative entry means the powers of Q do not decay; if
    // the exact halting check disagrees, the elimination is broken.
    if (matrix_power_decays(Q) == Ternary::Holds) {
      std::cerr << "lemm: internal consistency violation in inverse_nonneg\n";
      assert(false && "inverse_nonneg: negative entry while powers decay");
    }
    return std::nullopt;
  }
  return inv;
}

std::vector<Rational> charpoly(const Mat& Q) {
  if (Q.rows() != Q.cols()) throw LemmError("charpoly: matrix must be square");
  const int n = Q.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  Mat M = Mat::identity(n);
  for (int k = 1; k <= n; ++k) {
    Mat MQ = Q * M;
    Rational ck = -(MQ.trace() / Rational(k));
    c[n - k] = ck;
    M = MQ;
    for (int i = 0; i < n; ++i) M.at(i, i) += ck;
  }
  return c;
}

int Poly::degree() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (!c[i].is_zero()) return i;
  return -1;
}

Rational Poly::eval(const Rational& x) const {
  Rational acc(0);
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

Poly Poly::derivative() const {
  Poly d;
  for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * Rational(static_cast<long>(i)));
  return d;
}

void Poly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

void Poly::normalize() {
  trim();
  Rational m = max_abs(c);
  if (m.is_zero()) return;
  for (auto& v : c) v /= m;
}

namespace {

Poly poly_rem(Poly a, const Poly& b) {
  a.trim();
  int db = b.degree();
  assert(db >= 0);
  const Rational& lead = b.c[db];
  while (a.degree() >= db && a.degree() >= 0) {
    int da = a.degree();
    Rational f = a.c[da] / lead;
    for (int i = 0; i <= db; ++i) a.c[da - db + i] -= f * b.c[i];
    a.c[da] = 0;  // clear rounding-free leading term
    a.trim();
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  a.normalize();
  b.normalize();
  while (b.degree() >= 0) {
    Poly r = poly_rem(a, b);
    r.normalize();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_div_exact(const Poly& a, const Poly& b) {
  Poly rem = a, q;
  rem.trim();
  int db = b.degree();
  q.c.assign(std::max(0, rem.degree() - db + 1), Rational(0));
  while (rem.degree() >= db) {
    int da = rem.degree();
    Rational f = rem.c[da] / b.c[db];
    q.c[da - db] = f;
    for (int i = 0; i <= db; ++i) rem.c[da - db + i] -= f * b.c[i];
    rem.trim();
  }
  return q;
}

Poly square_free(const Poly& p) {
  Poly g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p;
  return poly_div_exact(p, g);
}

}  // namespace

std::vector<Poly> sturm_chain(const Poly& p_in) {
  Poly p = square_free(p_in);
  p.normalize();
  std::vector<Poly> chain{p};
  if (p.degree() <= 0) return chain;
  Poly d = p.derivative();
  d.normalize();
  chain.push_back(d);
  while (chain.back().degree() > 0) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    for (auto& v : r.c) v = -v;
    r.normalize();
    if (r.degree() < 0) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

int sign_variations_at(const std::vector<Poly>& chain, const Rational& x) {
  int variations = 0, prev = 0;
  for (const auto& q : chain) {
    int s = q.eval(x).sign();
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++variations;
    prev = s;
  }
  return variations;
}

// Distinct real roots in the open interval (a, b); requires p(a), p(b) != 0.
int count_real_roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
  assert(!chain.empty());
  assert(chain[0].eval(a).sign() != 0 && chain[0].eval(b).sign() != 0);
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

Rational root_modulus_bound(const Poly& p_in) {
  Poly p = p_in;
  p.trim();
  int d = p.degree();
  if (d <= 0) return Rational(1);
  Rational m(0);
  for (int i = 0; i < d; ++i) {
    Rational a = (p.c[i] / p.c[d]).abs();
    if (a > m) m = a;
  }
  return m + 1;  // every root has modulus strictly below this
}

namespace {

// A point in (lo, hi) where p does not vanish; exists because p has finitely
// many roots.
Rational nonroot_between(const Poly& p, const Rational& lo, const Rational& hi) {
  Rational span = hi - lo;
  Rational frac(1, 2);
  for (int k = 0; k < 4096; ++k) {
    Rational cand = lo + span * frac;
    if (p.eval(cand).sign() != 0) return cand;
    frac /= 2;
  }
  throw LemmError("nonroot_between: could not find a regular point");
}

// Largest real root of p inside (lo0, hi0), bracketed to width <= tol.
// Preconditions: p(lo0) != 0, p(hi0) != 0, at least one root in the interval.
RootBracket bisect_largest(const Poly& p, const std::vector<Poly>& chain, Rational lo,
                           Rational hi, const Rational& tol) {
  std::optional<Rational> exact_hit;
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (p.eval(mid).sign() == 0) {
      exact_hit = mid;  // a root, though maybe not the largest
      Rational probe = nonroot_between(p, mid, hi);
      if (count_real_roots_in(chain, probe, hi) >= 1)
        lo = probe;
      else
        hi = probe;  // largest root is in [mid, probe)
      continue;
    }
    if (count_real_roots_in(chain, mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  if (exact_hit && *exact_hit > lo) lo = *exact_hit;
  return {lo, hi};
}

}  // namespace

std::optional<RootBracket> largest_real_root(const Poly& p_in, const Rational& tol) {
  Poly p = p_in;
  p.trim();
  if (p.degree() <= 0) return std::nullopt;
  auto chain = sturm_chain(p);
  Rational B = root_modulus_bound(p);
  if (count_real_roots_in(chain, -B, B) == 0) return std::nullopt;
  return bisect_largest(chain[0], chain, -B, B, tol);
}

std::optional<RootBracket> largest_real_root_abs(const Poly& p, const Rational& tol) {
  auto pos = largest_real_root(p, tol);
  Poly neg = p;
  for (size_t i = 1; i < neg.c.size(); i += 2) neg.c[i] = -neg.c[i];  // p(-x) up to sign
  auto negside = largest_real_root(neg, tol);
  if (!pos && !negside) return std::nullopt;
  // max |root| = max(largest root, -(smallest root)); clamp below at 0
  Rational lo(0), hi(0);
  auto fold = [&](const RootBracket& b) {
    if (b.lo > lo) lo = b.lo;
    if (b.hi > hi) hi = b.hi;
  };
  if (pos) fold(*pos);
  if (negside) fold(*negside);
  return RootBracket{lo, hi};
}

namespace {

// Collatz-Wielandt bounds for nonnegative Q, run on Q + I so the iterate
// stays strictly positive. Each iterate yields certified bounds; the best
// lower and upper bounds over all iterates are kept.
RhoInterval collatz_wielandt(const Mat& Q, int iterations, const Rational& tolerance) {
  const int n = Q.rows();
  if (n == 0) return {Rational(0), Rational(0)};
  Mat Qp = Q + Mat::identity(n);
  Vec x(n, Rational(1));
  Rational lo(0), hi = Q.inf_norm();
  {
    Rational h1 = Q.one_norm();
    if (h1 < hi) hi = h1;
  }
  for (int it = 0; it < iterations; ++it) {
    Vec y = Qp * x;
    Rational rmin = y[0] / x[0], rmax = rmin;
    for (int i = 1; i < n; ++i) {
      Rational r = y[i] / x[i];
      if (r < rmin) rmin = r;
      if (r > rmax) rmax = r;
    }
    rmin -= 1;
    rmax -= 1;
    if (rmin > lo) lo = rmin;
    if (rmax < hi) hi = rmax;
    if (hi - lo <= tolerance) break;
    Rational m = max_abs(y);
    if (m.is_zero()) break;
    for (auto& v : y) v /= m;
    x = std::move(y);
  }
  return {lo, hi};
}

}  // namespace

RhoInterval spectral_radius_estimate(const Mat& Q, int iterations, const Rational& tolerance) {
  if (Q.rows() != Q.cols()) throw LemmError("spectral_radius_estimate: matrix must be square");
  if (iterations < 1) throw LemmError("spectral_radius_estimate: iterations must be >= 1");
  if (Q.is_nonneg()) return collatz_wielandt(Q, iterations, tolerance);
  RhoInterval abs_part = collatz_wielandt(Q.abs(), iterations, tolerance);
  Rational hi = abs_part.hi;  // rho(Q) <= rho(|Q|)
  Rational norm = Q.inf_norm();
  if (norm < hi) hi = norm;
  norm = Q.one_norm();
  if (norm < hi) hi = norm;
  Rational lo(0);
  Poly p{charpoly(Q)};
  if (auto bracket = largest_real_root_abs(p, tolerance))
    if (bracket->lo > lo) lo = bracket->lo;
  if (lo > hi) lo = hi;  // both bounds are sound; intersection is nonempty
  return {lo, hi};
}

std::string to_string(Ternary t) {
  switch (t) {
    case Ternary::Holds: return "holds";
    case Ternary::Fails: return "fails";
    default: return "unknown";
  }
}

Ternary matrix_power_decays(const Mat& Q, int max_power) {
  if (Q.rows() != Q.cols()) throw LemmError("matrix_power_decays: matrix must be square");
  const int n = Q.rows();
  if (n == 0) return Ternary::Holds;
  if (Q.is_nonneg()) {
    // Exact: Q^m -> 0 iff (I - Q) x = 1 has a unique nonnegative solution.
    LinearSolveResult r = solve_linear(Q, Vec(n, Rational(1)));
    if (!r.unique) return Ternary::Fails;
    for (const auto& v : r.x)
      if (v.sign() < 0) return Ternary::Fails;
    return Ternary::Holds;
  }
  if (certify_rho_at_least_one(Q, max_power)) return Ternary::Fails;
  RhoInterval i = spectral_radius_estimate(Q, max_power, Rational(1, 1 << 20));
  if (i.hi < 1) return Ternary::Holds;
  return Ternary::Unknown;
}

std::optional<RhoCertificate> certify_rho_at_least_one(const Mat& Q, int max_power) {
  const int n = Q.rows();
  if (n == 0) return std::nullopt;
  const Rational tol(1, 1 << 20);
  if (Q.is_nonneg()) {
    if (matrix_power_decays(Q) != Ternary::Fails) return std::nullopt;
    // The Perron root is a real eigenvalue >= 1; bracket it for the report.
    Rational lower(1);
    if (auto b = largest_real_root(Poly{charpoly(Q)}, tol))
      if (b->lo > lower) lower = b->lo;
    return RhoCertificate{lower, "nonneg-exact"};
  }
  // Cheap rejection: a power with sup-norm below 1 certifies rho < 1, so no
  // failure certificate can exist.
  {
    Mat P = Q;
    for (int k = 0; k < 6; ++k) {  // powers 1, 2, 4, 8, 16, 32
      if (P.inf_norm() < Rational(1) || P.one_norm() < Rational(1)) return std::nullopt;
      if (k < 5) P = P * P;
    }
  }
  Poly p{charpoly(Q)};
  auto chain = sturm_chain(p);
  Rational B = root_modulus_bound(p);
  if (p.eval(Rational(1)).is_zero()) return RhoCertificate{Rational(1), "real-eigenvalue"};
  if (p.eval(Rational(-1)).is_zero()) return RhoCertificate{Rational(1), "real-eigenvalue"};
  if (count_real_roots_in(chain, Rational(1), B) >= 1) {
    RootBracket b = bisect_largest(chain[0], chain, Rational(1), B, tol);
    Rational lower = b.lo < 1 ? Rational(1) : b.lo;
    return RhoCertificate{lower, "real-eigenvalue"};
  }
  Poly neg = p;
  for (size_t i = 1; i < neg.c.size(); i += 2) neg.c[i] = -neg.c[i];
  auto nchain = sturm_chain(neg);
  Rational nB = root_modulus_bound(neg);
  if (count_real_roots_in(nchain, Rational(1), nB) >= 1) {
    RootBracket b = bisect_largest(nchain[0], nchain, Rational(1), nB, tol);
    Rational lower = b.lo < 1 ? Rational(1) : b.lo;
    return RhoCertificate{lower, "real-eigenvalue"};
  }
  // |trace(Q^m)| >= n forces rho^m >= 1.
  Mat P = Q;
  for (int m = 1; m <= max_power; ++m) {
    if (m > 1) P = P * Q;
    if (P.trace().abs() >= Rational(n)) return RhoCertificate{Rational(1), "trace-power"};
  }
  return std::nullopt;
}

}  // namespace lemm
