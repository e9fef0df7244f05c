#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sgnash {

/// Arbitrary-precision rational, kept in canonical form: gcd(|num|, den) = 1
/// and den > 0. Thin value wrapper around GMP's mpq_class; every game
/// quantity (reward, probability, rate, threshold) is stored as one of these
/// so that certification thresholds come out exact.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {}
  Rational(int n) : value_(static_cast<long>(n)) {}
  Rational(long num, long den) : value_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : value_(q) {
    if (value_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    value_.canonicalize();
  }

  /// Parses "7", "-3/5" or a finite decimal such as "4.4" / "1.2e-3".
  static Rational parse(const std::string& text);

  const mpq_class& raw() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const { return value_ == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

  double to_double() const { return value_.get_d(); }

  /// "num/den", or just "num" for integers.
  std::string to_string() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  friend Rational abs(const Rational& a) { return Rational(mpq_class(abs(a.value_))); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class value_;
};

inline Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    mpq_class q;
    if (q.set_str(num + "/" + den, 10) != 0)
      throw std::invalid_argument("Rational::parse: bad fraction '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator in '" + text + "'");
    q.canonicalize();
    return Rational(q);
  }
  auto dot = text.find('.');
  auto exp = text.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("Rational::parse: bad integer '" + text + "'");
    return Rational(q);
  }
  // Finite decimal with optional exponent: digits scaled by a power of ten.
  std::string mantissa = exp == std::string::npos ? text : text.substr(0, exp);
  long exponent = 0;
  if (exp != std::string::npos) {
    try {
      exponent = std::stol(text.substr(exp + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("Rational::parse: bad exponent in '" + text + "'");
    }
  }
  dot = mantissa.find('.');
  std::string digits = mantissa;
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("Rational::parse: bad decimal '" + text + "'");
  mpz_class m;
  if (m.set_str(digits, 10) != 0)
    throw std::invalid_argument("Rational::parse: bad decimal '" + text + "'");
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class q = exponent < 0 ? mpq_class(m, pow10) : mpq_class(m * pow10);
  q.canonicalize();
  return Rational(q);
}

}  // namespace sgnash
