#pragma once

#include <cassert>
#include <cstddef>

#include "lemm/rational.hpp"

namespace lemm {

/// Dense matrix of exact rationals. Row-major, 0-based accessors.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }
  const Rational& at(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Mat operator*(const Mat& o) const {
    assert(cols_ == o.rows_);
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rational& v = at(i, k);
        if (v.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) r.at(i, j) += v * o.at(k, j);
      }
    return r;
  }

  Vec operator*(const Vec& x) const {
    assert(static_cast<int>(x.size()) == cols_);
    Vec r(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero()) r[i] += at(i, j) * x[j];
    return r;
  }

  Mat operator+(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  Mat scaled(const Rational& c) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
  }

  Mat abs() const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].abs();
    return r;
  }

  bool is_nonneg() const {
    for (const auto& v : a_)
      if (v.sign() < 0) return false;
    return true;
  }

  Rational trace() const {
    assert(rows_ == cols_);
    Rational t = 0;
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

  /// max_i sum_j |a_ij| — a sound upper bound on the spectral radius.
  Rational inf_norm() const {
    Rational m = 0;
    for (int i = 0; i < rows_; ++i) {
      Rational s = 0;
      for (int j = 0; j < cols_; ++j) s += at(i, j).abs();
      if (s > m) m = s;
    }
    return m;
  }

  Rational one_norm() const {
    Rational m = 0;
    for (int j = 0; j < cols_; ++j) {
      Rational s = 0;
      for (int i = 0; i < rows_; ++i) s += at(i, j).abs();
      if (s > m) m = s;
    }
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

}  // namespace lemm
