#pragma once

// Small dense row-major matrices over a Field. Dimensions in this library are
// tiny (dim <= ~10), so there is no blocking and no expression templates.

#include "hlie/scalar.hpp"

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hlie {

template <Field T>
using Vector = std::vector<T>;

template <Field T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const Vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      assert(cols[j].size() == rows);
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

  Vector<T> column(std::size_t j) const {
    Vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  T trace() const {
    T s(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
  }

  T max_abs() const {
    T m(0);
    for (const T& x : data_) {
      T a = abs_of(x);
      if (a > m) m = a;
    }
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (T& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vector<T> operator*(const Matrix& a, const Vector<T>& x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    Vector<T> y(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) y[i] += a(i, k) * x[k];
    return y;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Field T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

inline Matrix<double> to_float(const Matrix<Rational>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}
inline const Matrix<double>& to_float(const Matrix<double>& m) { return m; }

inline Vector<double> to_float(const Vector<Rational>& v) {
  Vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}

// ---- vector helpers --------------------------------------------------------

template <Field T>
Vector<T> unit_vector(std::size_t n, std::size_t i) {
  Vector<T> v(n, T(0));
  v.at(i) = T(1);
  return v;
}

template <Field T>
T dot(const Vector<T>& x, const Vector<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// x^T G y
template <Field T>
T inner(const Matrix<T>& gram, const Vector<T>& x, const Vector<T>& y) {
  if (gram.rows() != x.size() || gram.cols() != y.size())
    throw std::invalid_argument("inner: dimension mismatch");
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    T row(0);
    for (std::size_t j = 0; j < y.size(); ++j) row += gram(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

template <Field T>
Vector<T> axpy(const T& a, const Vector<T>& x, Vector<T> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
  return y;
}

template <Field T>
Vector<T> scaled(const T& a, Vector<T> x) {
  for (T& v : x) v *= a;
  return x;
}

template <Field T>
T max_abs(const Vector<T>& x) {
  T m(0);
  for (const T& v : x) {
    T a = abs_of(v);
    if (a > m) m = a;
  }
  return m;
}

template <Field T>
bool all_zero(const Vector<T>& x, double tol) {
  for (const T& v : x)
    if (!is_zero(v, tol)) return false;
  return true;
}

}  // namespace hlie
