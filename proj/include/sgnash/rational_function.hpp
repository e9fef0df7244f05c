#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgnash/polynomial.hpp"
#include "sgnash/rational.hpp"

namespace sgnash {

/// Ratio of two Rational-coefficient polynomials in the discount variable,
/// kept in normal form: gcd(num, den) = 1 and den monic. Together with
/// Rational this is the second exact scalar field the solvers run on; a value
/// vector computed over it is the exact parametric value in the discount
/// variable.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Rational(1)) {}
  RationalFunction(const Rational& constant) : num_(constant), den_(Rational(1)) {}
  RationalFunction(const Polynomial& p) : num_(p), den_(Rational(1)) {}
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RationalFunction variable() { return RationalFunction(Polynomial::variable()); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

  RationalFunction operator-() const { return RationalFunction(-num_, den_, no_normalize_tag{}); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  /// Exact evaluation; the point must not be a pole.
  Rational evaluate(const Rational& x) const {
    const Rational d = den_.evaluate(x);
    if (d.is_zero()) throw std::domain_error("RationalFunction: evaluation at a pole");
    return num_.evaluate(x) / d;
  }

  std::string to_string(const std::string& var = "b") const {
    if (den_ == Polynomial(Rational(1))) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

 private:
  struct no_normalize_tag {};
  RationalFunction(Polynomial num, Polynomial den, no_normalize_tag)
      : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial(Rational(1));
      return;
    }
    Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    const Rational lead = den_.leading();
    if (lead != Rational(1)) {
      const Rational inv = Rational(1) / lead;
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }

  Polynomial num_;
  Polynomial den_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) {
  return os << f.to_string();
}

enum class Ordering { Less, Equal, Greater };

/// Leading Laurent coefficients of f in the deviation t = 1 - b as b -> 1-.
/// `order` is the exponent of the first reported coefficient; a pole at b = 1
/// shows up as a negative order. The zero function reports order 0 and all
/// zero coefficients.
struct LaurentSeries {
  bool is_identically_zero = false;
  long order = 0;
  std::vector<Rational> coefficients;
};

inline LaurentSeries series_at_limit(const RationalFunction& f, int terms) {
  if (terms <= 0) throw std::invalid_argument("series_at_limit: need at least one term");
  LaurentSeries out;
  if (f.is_zero()) {
    out.is_identically_zero = true;
    out.coefficients.assign(terms, Rational(0));
    return out;
  }
  const Polynomial one_minus_t({Rational(1), Rational(-1)});
  const Polynomial num_t = f.num().compose(one_minus_t);
  const Polynomial den_t = f.den().compose(one_minus_t);
  const int vn = num_t.valuation();
  const int vd = den_t.valuation();
  out.order = vn - vd;
  // Power-series division of the valuation-shifted parts.
  std::vector<Rational> n(terms, Rational(0)), d(terms, Rational(0));
  for (int i = 0; i < terms; ++i) {
    n[i] = num_t.coefficient(vn + i);
    d[i] = den_t.coefficient(vd + i);
  }
  out.coefficients.assign(terms, Rational(0));
  for (int j = 0; j < terms; ++j) {
    Rational acc = n[j];
    for (int i = 1; i <= j; ++i) acc -= d[i] * out.coefficients[j - i];
    out.coefficients[j] = acc / d[0];
  }
  return out;
}

/// Total order on function germs at b -> 1-: the sign of f - g on some
/// interval (b', 1). Decided exactly by the first nonzero Laurent coefficient
/// of the difference.
inline Ordering compare_near_limit(const RationalFunction& f, const RationalFunction& g) {
  const RationalFunction diff = f - g;
  if (diff.is_zero()) return Ordering::Equal;
  const LaurentSeries lead = series_at_limit(diff, 1);
  return lead.coefficients[0].sign() > 0 ? Ordering::Greater : Ordering::Less;
}

namespace detail {

/// Positive radius r such that p(t) != 0 for 0 < |t| < r: the classic
/// |t| < |a_v| / (|a_v| + max_{i>v} |a_i|) bound around the lowest-order term.
inline Rational root_free_radius(const Polynomial& p) {
  const int v = p.valuation();
  if (v < 0) throw std::domain_error("root_free_radius: zero polynomial");
  const Rational lead = abs(p.coefficient(v));
  Rational maxima(0);
  for (int k = v + 1; k <= p.degree(); ++k) {
    const Rational a = abs(p.coefficient(k));
    if (a > maxima) maxima = a;
  }
  if (maxima.is_zero()) return Rational(1);
  return lead / (lead + maxima);
}

}  // namespace detail

/// For f not identically zero and finite on an interval below b = 1, returns
/// a threshold b0 in [0, 1) such that f keeps the sign of its b -> 1- germ
/// (possibly touching zero at b0 itself) everywhere on [b0, 1).
inline Rational limit_sign_threshold(const RationalFunction& f) {
  if (f.is_zero()) throw std::domain_error("limit_sign_threshold: zero function");
  const Polynomial one_minus_t({Rational(1), Rational(-1)});
  const Rational rn = detail::root_free_radius(f.num().compose(one_minus_t));
  const Rational rd = detail::root_free_radius(f.den().compose(one_minus_t));
  Rational r = rn < rd ? rn : rd;
  if (r > Rational(1)) r = Rational(1);
  Rational b0 = Rational(1) - r;
  if (b0.sign() < 0) b0 = Rational(0);
  // Keep the closed endpoint out of any pole.
  if (f.den().evaluate(b0).is_zero()) b0 = Rational(1) - r / Rational(2);
  return b0;
}

}  // namespace sgnash
