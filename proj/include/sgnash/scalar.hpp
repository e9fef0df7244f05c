#pragma once

#include <cmath>
#include <concepts>

#include "sgnash/rational.hpp"
#include "sgnash/rational_function.hpp"

namespace sgnash {

/// Traits of the scalar fields the solvers run on: exact rationals, exact
/// rational functions in the discount variable, and doubles with an absolute
/// zero tolerance.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static Rational from_rational(const Rational& x) { return x; }
  static Rational default_tolerance() { return Rational(0); }
};

template <>
struct scalar_traits<RationalFunction> {
  static constexpr bool exact = true;
  static RationalFunction zero() { return RationalFunction(); }
  static RationalFunction one() { return RationalFunction(Rational(1)); }
  static bool is_zero(const RationalFunction& x) { return x.is_zero(); }
  static RationalFunction from_rational(const Rational& x) { return RationalFunction(x); }
  static RationalFunction default_tolerance() { return RationalFunction(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  /// Absolute tolerance for zero tests and verdicts on the float field.
  static inline double tolerance = 1e-9;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return std::abs(x) <= tolerance; }
  static double from_rational(const Rational& x) { return x.to_double(); }
  static double default_tolerance() { return tolerance; }
};

template <class T>
concept Scalar = requires(T a, T b, const Rational& q) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a* b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { scalar_traits<T>::zero() } -> std::convertible_to<T>;
  { scalar_traits<T>::one() } -> std::convertible_to<T>;
  { scalar_traits<T>::is_zero(a) } -> std::convertible_to<bool>;
  { scalar_traits<T>::from_rational(q) } -> std::convertible_to<T>;
};

}  // namespace sgnash
