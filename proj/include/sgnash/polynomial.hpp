#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgnash/rational.hpp"

namespace sgnash {

/// Dense univariate polynomial with Rational coefficients, coefficient index
/// = degree. The zero polynomial is the empty coefficient list; otherwise the
/// trailing coefficient is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant) { coeffs_.push_back(constant); trim(); }
  Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// The indeterminate itself.
  static Polynomial variable() { return Polynomial({Rational(0), Rational(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree of the zero polynomial is -1 by convention.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : Rational(0);
  }
  Rational leading() const {
    return coeffs_.empty() ? Rational(0) : coeffs_.back();
  }
  /// Index of the lowest-order nonzero coefficient; -1 for zero.
  int valuation() const {
    for (int k = 0; k < static_cast<int>(coeffs_.size()); ++k)
      if (!coeffs_[k].is_zero()) return k;
    return -1;
  }

  Polynomial operator-() const {
    std::vector<Rational> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = -coeffs_[i];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(static_cast<int>(i)) + b.coefficient(static_cast<int>(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
      for (size_t j = 0; j < b.coeffs_.size(); ++j)
        c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Rational& s) {
    std::vector<Rational> c(a.coeffs_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] * s;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& a) { return a * s; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Rational evaluate(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// p(q(x)) by Horner over polynomial arithmetic.
  Polynomial compose(const Polynomial& q) const {
    Polynomial acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + Polynomial(*it);
    return acc;
  }

  /// Quotient and remainder; divisor must be nonzero.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("Polynomial: division by zero polynomial");
    std::vector<Rational> rem = a.coeffs_;
    std::vector<Rational> quot;
    const int db = b.degree();
    const Rational lead = b.leading();
    while (static_cast<int>(rem.size()) - 1 >= db) {
      const Rational factor = rem.back() / lead;
      const int shift = static_cast<int>(rem.size()) - 1 - db;
      if (static_cast<int>(quot.size()) < shift + 1) quot.resize(shift + 1, Rational(0));
      quot[shift] = factor;
      for (int i = 0; i <= db; ++i) rem[shift + i] -= factor * b.coeffs_[i];
      while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
      if (rem.empty()) break;
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  /// Monic gcd (leading coefficient 1); gcd(0, 0) = 0.
  friend Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      Polynomial r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * (Rational(1) / a.leading());
  }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

inline std::string Polynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[k];
    if (c.is_zero()) continue;
    if (!out.empty()) out += c.sign() < 0 ? " - " : " + ";
    else if (c.sign() < 0) out += "-";
    const Rational mag = abs(c);
    const bool unit = mag == Rational(1);
    if (k == 0) {
      out += mag.to_string();
    } else {
      if (!unit) out += mag.to_string() + "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  return os << p.to_string();
}

}  // namespace sgnash
