#pragma once

#include "lemm/system.hpp"

namespace lemm::testing {

// x1 = max{x2, x3}; x2 = -x3 + 1; x3 = x3/2 + 1/5. Unique solution
// [3/5, 3/5, 2/5].
inline LemmSystem example1() {
  LemmSystem s;
  s.n1 = 0;
  s.n2 = 1;
  s.n = 3;
  s.choices = {{2, 3}};
  s.affine_rows = {{0, 0, -1}, {0, 0, Rational(1, 2)}};
  s.offsets = {0, 1, Rational(1, 5)};
  s.validate_and_normalize();
  return s;
}

// example1 with the last offset raised to 1/4; unique solution [1/2,1/2,1/2].
inline LemmSystem example1_raised() {
  LemmSystem s = example1();
  s.offsets[2] = Rational(1, 4);
  return s;
}

// x1 = min{x3,x4}; x2 = max{x5,x6}; four mixed-sign affine rows. Halting
// holds but the minimax equality fails.
inline LemmSystem example2() {
  LemmSystem s;
  s.n1 = 1;
  s.n2 = 1;
  s.n = 6;
  s.choices = {{3, 4}, {5, 6}};
  s.affine_rows = {
      {Rational(-9, 50), Rational(18, 25), 0, 0, 0, 0},
      {Rational(9, 25), Rational(-9, 50), 0, 0, 0, 0},
      {Rational(9, 25), Rational(-27, 50), 0, 0, 0, 0},
      {Rational(-9, 50), Rational(-9, 25), 0, 0, 0, 0},
  };
  s.offsets = {0, 0, 0, 0, 2, 2};
  s.validate_and_normalize();
  return s;
}

// x1 = min{x2, x3}; the argmin-by-x1 subsolution is not the solution.
inline LemmSystem example3() {
  LemmSystem s;
  s.n1 = 1;
  s.n2 = 0;
  s.n = 4;
  s.choices = {{2, 3}};
  s.affine_rows = {
      {Rational(-1, 10), 0, 0, Rational(4, 5)},
      {Rational(1, 10), 0, 0, Rational(1, 2)},
      {Rational(-1, 2), 0, 0, Rational(6, 5)},
  };
  s.offsets = {0, Rational(11, 5), Rational(11, 5), Rational(-7, 5)};
  s.validate_and_normalize();
  return s;
}

inline Vec rvec(std::initializer_list<Rational> xs) { return Vec(xs); }

}  // namespace lemm::testing
