#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lemm/matrix.hpp"
#include "lemm/system.hpp"

namespace lemm {

/// Outcome of solving (I - Q) x = b exactly.
struct LinearSolveResult {
  bool unique = false;
  Vec x;                         // set when unique
  std::vector<Vec> kernel;       // null-space basis of (I - Q) when singular
  std::optional<Vec> particular; // present iff b lies in the column space

  bool is_unique() const { return unique; }
};

/// Solves (I - Q) x = b by fraction-free (Bareiss) elimination.
/// Unique iff det(I - Q) != 0; otherwise returns a kernel basis and, when the
/// system is consistent, a particular solution with free variables at zero.
LinearSolveResult solve_linear(const Mat& Q, const Vec& b);

/// Solves A x = b for a general square A (same elimination core).
LinearSolveResult solve_square(const Mat& A, const Vec& b);

/// For Q >= 0 entrywise: returns (I - Q)^-1 when it exists and is entrywise
/// nonnegative; nullopt when (I - Q) is singular or the inverse has a
/// negative entry (equivalently, Q^m does not decay to zero).
/// Throws LemmError on a negative input entry.
std::optional<Mat> inverse_nonneg(const Mat& Q);

/// Coefficients of det(lambda*I - Q), monic, index i = coefficient of
/// lambda^i. Faddeev-LeVerrier over exact rationals.
std::vector<Rational> charpoly(const Mat& Q);

/// Polynomial with exact rational coefficients; c[i] multiplies x^i.
struct Poly {
  std::vector<Rational> c;

  int degree() const;
  Rational eval(const Rational& x) const;
  Poly derivative() const;
  void trim();
  /// Divides by the largest absolute coefficient; sign preserved.
  void normalize();
};

/// Sturm chain of p; sign variations at a and b count real roots in (a, b].
std::vector<Poly> sturm_chain(const Poly& p);
int sign_variations_at(const std::vector<Poly>& chain, const Rational& x);
int count_real_roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b);

/// Strict upper bound on the modulus of every root (Cauchy bound).
Rational root_modulus_bound(const Poly& p);

/// Largest real root bracketed to width <= tol; nullopt when p has no real
/// roots. The exact root lies in [lo, hi].
struct RootBracket {
  Rational lo, hi;
};
std::optional<RootBracket> largest_real_root(const Poly& p, const Rational& tol);
/// Same for max |r| over real roots r.
std::optional<RootBracket> largest_real_root_abs(const Poly& p, const Rational& tol);

/// Interval certified to contain the spectral radius. For nonnegative Q both
/// ends come from Collatz-Wielandt ratios and the interval is tightened until
/// its width is <= tolerance or the iteration budget runs out. For general Q
/// the upper end is min(||Q||_inf, ||Q||_1, rho(|Q|) bound) and the lower end
/// is the best real-eigenvalue bracket (sound but possibly loose).
struct RhoInterval {
  Rational lo, hi;
};
RhoInterval spectral_radius_estimate(const Mat& Q, int iterations = 64,
                                     const Rational& tolerance = Rational(1, 1 << 30));

enum class Ternary { Holds, Fails, Unknown };
std::string to_string(Ternary t);

/// Does Q^m -> 0? Exact for nonnegative Q via one linear solve of
/// (I - Q) x = 1 (x unique and nonnegative iff the powers decay). For general
/// Q: Fails on a certified rho >= 1, Holds on a certified rho < 1, else
/// Unknown.
Ternary matrix_power_decays(const Mat& Q, int max_power = 64);

/// Sound certificate that rho(Q) >= 1, or nullopt if none was found.
/// Routes: exact nonnegative test; real eigenvalue >= 1 or <= -1 located by
/// Sturm counts; |trace(Q^m)| >= n for some m <= max_power.
struct RhoCertificate {
  Rational lower;  // certified rho >= lower (>= 1)
  std::string kind;
};
std::optional<RhoCertificate> certify_rho_at_least_one(const Mat& Q, int max_power = 16);

}  // namespace lemm
