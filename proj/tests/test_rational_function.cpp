#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace sgnash;
using testutil::rat;

namespace {

const RationalFunction kBeta = RationalFunction::variable();
const RationalFunction kOne = RationalFunction(rat(1));

RationalFunction over_one_minus_beta(const RationalFunction& num) {
  return num / (kOne - kBeta);
}

/// Random rational function finite on (0,1): numerator arbitrary, denominator
/// a product of (c - beta) factors with c outside (0,1), times (1-beta)^k.
RationalFunction random_germ(testutil::Rng& rng) {
  std::vector<Rational> nc(rng.uniform(1, 4));
  for (auto& c : nc) c = rng.signed_rational(5, 2);
  RationalFunction f{Polynomial(std::vector<Rational>(nc))};
  const int factors = rng.uniform(0, 2);
  for (int i = 0; i < factors; ++i) {
    const Rational c = rng.uniform(0, 1) ? Rational(rng.uniform(2, 5)) : Rational(-rng.uniform(0, 3));
    f = f / (RationalFunction(c) - kBeta);
  }
  const int poles = rng.uniform(0, 2);
  for (int i = 0; i < poles; ++i) f = over_one_minus_beta(f);
  return f;
}

}  // namespace

TEST_CASE("rational functions stay in normal form") {
  // (1-b^2)/(1-b) reduces to 1+b
  const RationalFunction f = (kOne - kBeta * kBeta) / (kOne - kBeta);
  CHECK(f == kOne + kBeta);
  CHECK(f.den() == Polynomial(rat(1)));

  // denominator is monic after every operation
  testutil::Rng rng(77);
  for (int iter = 0; iter < 40; ++iter) {
    const RationalFunction a = random_germ(rng), b = random_germ(rng);
    for (const RationalFunction& r : {a + b, a - b, a * b}) {
      if (r.is_zero()) {
        CHECK(r.den() == Polynomial(rat(1)));
        continue;
      }
      CHECK(r.den().leading() == rat(1));
      CHECK(gcd(r.num(), r.den()).degree() == 0);
    }
    if (!b.is_zero()) {
      const RationalFunction r = a / b;
      if (!r.is_zero()) CHECK(r.den().leading() == rat(1));
    }
  }
}

TEST_CASE("evaluation refuses poles") {
  const RationalFunction f = kOne / (kOne - kBeta);
  CHECK(f.evaluate(rat(1, 2)) == rat(2));
  CHECK_THROWS_AS(f.evaluate(rat(1)), std::domain_error);
}

TEST_CASE("series at the discount limit: simple pole") {
  const auto s = series_at_limit(kOne / (kOne - kBeta), 2);
  CHECK_FALSE(s.is_identically_zero);
  CHECK(s.order == -1);
  REQUIRE(s.coefficients.size() == 2);
  CHECK(s.coefficients[0] == rat(1));
  CHECK(s.coefficients[1] == rat(0));
}

TEST_CASE("series at the discount limit: finite limit value") {
  // (3b+1)/(7+5b) -> 1/3 at b = 1
  const RationalFunction f =
      RationalFunction(Polynomial({rat(1), rat(3)}), Polynomial({rat(7), rat(5)}));
  const auto s = series_at_limit(f, 1);
  CHECK(s.order == 0);
  CHECK(s.coefficients[0] == rat(1, 3));
}

TEST_CASE("series of the zero function") {
  // b(6p-2)/(1-b^2) at p = 1/3 vanishes identically
  const Rational p(1, 3);
  const RationalFunction num = kBeta * RationalFunction(rat(6) * p - rat(2));
  const RationalFunction f = num / (kOne - kBeta * kBeta);
  CHECK(f.is_zero());
  const auto s = series_at_limit(f, 3);
  CHECK(s.is_identically_zero);
  for (const auto& c : s.coefficients) CHECK(c == rat(0));
}

TEST_CASE("germ comparison at the discount limit") {
  CHECK(compare_near_limit(kOne / (kOne - kBeta), RationalFunction(rat(5))) == Ordering::Greater);

  const Rational p(3, 7);
  const RationalFunction same = RationalFunction(rat(4) + rat(5) * p) / (kOne - kBeta);
  CHECK(compare_near_limit(same, same) == Ordering::Equal);

  // at p = 1: b(3+7b)/(1-b^2) vs 9b/(1-b): the former loses near b -> 1
  const RationalFunction lhs =
      kBeta * RationalFunction(Polynomial({rat(3), rat(7)})) / (kOne - kBeta * kBeta);
  const RationalFunction rhs = kBeta * RationalFunction(rat(9)) / (kOne - kBeta);
  CHECK(compare_near_limit(lhs, rhs) == Ordering::Less);
}

TEST_CASE("germ comparison agrees with evaluation just below one") {
  testutil::Rng rng(4242);
  const Rational probe = Rational(1) - Rational(1, 1 << 20);
  int decided = 0;
  for (int iter = 0; iter < 60; ++iter) {
    const RationalFunction f = random_germ(rng), g = random_germ(rng);
    const Ordering ord = compare_near_limit(f, g);
    if (ord == Ordering::Equal) {
      CHECK((f - g).is_zero());
      continue;
    }
    ++decided;
    const Rational diff = f.evaluate(probe) - g.evaluate(probe);
    if (ord == Ordering::Greater) CHECK(diff > Rational(0));
    else CHECK(diff < Rational(0));
  }
  CHECK(decided > 20);
}

TEST_CASE("limit sign threshold brackets the germ sign") {
  testutil::Rng rng(99);
  for (int iter = 0; iter < 40; ++iter) {
    const RationalFunction f = random_germ(rng);
    if (f.is_zero()) continue;
    const Rational b0 = limit_sign_threshold(f);
    REQUIRE(b0 >= Rational(0));
    REQUIRE(b0 < Rational(1));
    const int germ_sign =
        compare_near_limit(f, RationalFunction()) == Ordering::Greater ? 1 : -1;
    // sample the closed-below interval [b0, 1)
    for (const Rational& t : {Rational(0), Rational(1, 7), Rational(1, 2), Rational(9, 10)}) {
      const Rational point = b0 + (Rational(1) - b0) * t * Rational(999, 1000);
      const Rational val = f.evaluate(point);
      if (germ_sign > 0) CHECK(val >= Rational(0));
      else CHECK(val <= Rational(0));
    }
  }
}
