#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgnash/scalar.hpp"

namespace sgnash {

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

/// Row-major dense matrix over one scalar field. Sized for desk-scale games
/// (a handful of states), so no sparsity and no blocking anywhere.
template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(int rows, int cols, const T& fill = scalar_traits<T>::zero())
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b);
    DenseMatrix c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] + b.data_[i];
    return c;
  }
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b);
    DenseMatrix c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
  }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("DenseMatrix: shape mismatch in product");
    DenseMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (scalar_traits<T>::is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) = c(i, j) + aik * b(k, j);
      }
    return c;
  }
  friend DenseMatrix operator*(const DenseMatrix& a, const T& s) {
    DenseMatrix c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] * s;
    return c;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("DenseMatrix: apply size mismatch");
    std::vector<T> y(rows_, scalar_traits<T>::zero());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[i] = y[i] + (*this)(i, j) * x[j];
    return y;
  }

  template <Scalar U>
  DenseMatrix<U> cast() const {
    DenseMatrix<U> m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = convert_scalar<U>((*this)(i, j));
    return m;
  }

 private:
  static void check_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("DenseMatrix: shape mismatch");
  }

  template <Scalar U>
  static U convert_scalar(const T& x) {
    if constexpr (std::is_same_v<T, U>) return x;
    else return scalar_traits<U>::from_rational(x);  // only exact -> wider casts are used
  }

  int rows_, cols_;
  std::vector<T> data_;
};

namespace detail {

// Pivot choice: largest magnitude for floats, first nonzero for exact fields
// (no stability concern there).
template <Scalar T>
int pick_pivot(const DenseMatrix<T>& a, int col, int from_row) {
  if constexpr (std::is_same_v<T, double>) {
    int best = -1;
    double best_mag = 0.0;
    for (int r = from_row; r < a.rows(); ++r) {
      const double mag = std::abs(a(r, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
    return best >= 0 && !scalar_traits<double>::is_zero(a(best, col)) ? best : -1;
  } else {
    for (int r = from_row; r < a.rows(); ++r)
      if (!scalar_traits<T>::is_zero(a(r, col))) return r;
    return -1;
  }
}

}  // namespace detail

/// Gaussian elimination on the augmented system; exact over exact fields.
template <Scalar T>
std::vector<T> solve_linear(DenseMatrix<T> a, std::vector<T> b) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve_linear: matrix not square");
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_linear: rhs size mismatch");
  for (int col = 0; col < n; ++col) {
    const int piv = detail::pick_pivot(a, col, col);
    if (piv < 0) throw SingularMatrix("solve_linear: no pivot at column " + std::to_string(col));
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      if (scalar_traits<T>::is_zero(a(r, col))) continue;
      const T factor = a(r, col) / a(col, col);
      a(r, col) = scalar_traits<T>::zero();
      for (int j = col + 1; j < n; ++j) a(r, j) = a(r, j) - factor * a(col, j);
      b[r] = b[r] - factor * b[col];
    }
  }
  std::vector<T> x(n, scalar_traits<T>::zero());
  for (int i = n - 1; i >= 0; --i) {
    T acc = b[i];
    for (int j = i + 1; j < n; ++j) acc = acc - a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

/// Columnwise solves against the identity.
template <Scalar T>
DenseMatrix<T> invert(const DenseMatrix<T>& a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("invert: matrix not square");
  DenseMatrix<T> inv(n, n);
  for (int col = 0; col < n; ++col) {
    std::vector<T> e(n, scalar_traits<T>::zero());
    e[col] = scalar_traits<T>::one();
    const std::vector<T> x = solve_linear(a, e);
    for (int r = 0; r < n; ++r) inv(r, col) = x[r];
  }
  return inv;
}

/// (I - b P)^{-1} over the rational-function field, for row-stochastic P.
/// Always invertible there: det(I - b P) is a nonzero polynomial.
inline DenseMatrix<RationalFunction> resolvent_inverse(const DenseMatrix<Rational>& p) {
  const int n = p.rows();
  if (p.cols() != n) throw std::invalid_argument("resolvent_inverse: matrix not square");
  const RationalFunction beta = RationalFunction::variable();
  DenseMatrix<RationalFunction> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RationalFunction entry = -(beta * RationalFunction(p(i, j)));
      if (i == j) entry += RationalFunction(Rational(1));
      m(i, j) = entry;
    }
  return invert(m);
}

}  // namespace sgnash
