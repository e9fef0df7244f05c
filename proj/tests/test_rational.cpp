#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace sgnash;
using testutil::rat;

TEST_CASE("rationals canonicalize on construction") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(1, 2).to_string() == "1/2");
  CHECK(Rational(-6, 3).to_string() == "-2");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational parsing accepts fractions, integers and finite decimals") {
  CHECK(Rational::parse("3/5") == Rational(3, 5));
  CHECK(Rational::parse("-3/5") == Rational(-3, 5));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("4.4") == Rational(22, 5));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational::parse("1.2e-3") == Rational(3, 2500));
  CHECK(Rational::parse("2e2") == Rational(200));
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
}

TEST_CASE("rational field arithmetic") {
  const Rational a(3, 4), b(-2, 3);
  CHECK(a + b == Rational(1, 12));
  CHECK(a - b == Rational(17, 12));
  CHECK(a * b == Rational(-1, 2));
  CHECK(a / b == Rational(-9, 8));
  CHECK(abs(b) == Rational(2, 3));
  CHECK(b < a);
  CHECK(b.sign() == -1);
  CHECK_THROWS_AS(a / Rational(0), std::domain_error);
}

TEST_CASE("polynomial normal form drops trailing zeros") {
  const Polynomial p({rat(1), rat(2), rat(0)});
  CHECK(p.degree() == 1);
  CHECK(Polynomial({rat(0)}).is_zero());
  CHECK(Polynomial().degree() == -1);
}

TEST_CASE("polynomial arithmetic and evaluation") {
  const Polynomial x = Polynomial::variable();
  const Polynomial p = x * x - Polynomial(rat(1));           // x^2 - 1
  const Polynomial q = x + Polynomial(rat(1));               // x + 1
  CHECK(p.evaluate(rat(3)) == rat(8));
  CHECK((p * q).degree() == 3);
  CHECK(p.compose(x + Polynomial(rat(1))).evaluate(rat(1)) == rat(3));  // (x+1)^2-1 at 1

  const auto [quot, rem] = divmod(p, q);
  CHECK(rem.is_zero());
  CHECK(quot == x - Polynomial(rat(1)));
  CHECK(gcd(p, q) == q);  // q is monic already
}

TEST_CASE("polynomial division invariant on random inputs") {
  testutil::Rng rng(1234);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Rational> ac(rng.uniform(1, 5)), bc(rng.uniform(1, 4));
    for (auto& c : ac) c = rng.signed_rational(6, 3);
    for (auto& c : bc) c = rng.signed_rational(6, 3);
    const Polynomial a{std::vector<Rational>(ac)}, b{std::vector<Rational>(bc)};
    if (b.is_zero()) continue;
    const auto [q, r] = divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
  }
}
