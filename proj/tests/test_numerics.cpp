#include "circspec/numerics.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace circspec;

TEST_CASE("ext_mul follows absorption rules") {
  CHECK(ext_mul(ExtNonNeg::exact(2), ExtNonNeg::exact(3)) == ExtNonNeg::exact(6));
  CHECK(ext_mul(ExtNonNeg::exact(2), ExtNonNeg::infinity()).is_infinite());
  CHECK_THROWS_AS(ext_mul(ExtNonNeg::zero(), ExtNonNeg::infinity()), DomainError);
  CHECK_THROWS_AS(ext_mul(ExtNonNeg::infinity(), ExtNonNeg::approx(0.0)), DomainError);
  CHECK(ext_mul(ExtNonNeg::exact(2), ExtNonNeg::approx(1.5)).is_approx());
}

TEST_CASE("ext_root is exact on perfect powers") {
  CHECK(ext_root(ExtNonNeg::exact(8), 3) == ExtNonNeg::exact(2));
  CHECK(ext_root(ExtNonNeg::infinity(), 5).is_infinite());
  const auto r = ext_root(ExtNonNeg::exact(2), 2);
  CHECK(r.is_approx());
  CHECK(r.to_double() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ext_root(ExtNonNeg::exact(Rational(27, 64)), 3) == ExtNonNeg::exact(Rational(3, 4)));
  CHECK(ext_root(ExtNonNeg::zero(), 4) == ExtNonNeg::zero());
}

TEST_CASE("division and ordering") {
  CHECK(ext_div(ExtNonNeg::exact(1), ExtNonNeg::zero()).is_infinite());
  CHECK(ext_div(ExtNonNeg::exact(3), ExtNonNeg::infinity()) == ExtNonNeg::zero());
  CHECK_THROWS_AS(ext_div(ExtNonNeg::zero(), ExtNonNeg::zero()), DomainError);
  CHECK(compare(ExtNonNeg::infinity(), ExtNonNeg::exact(1000000)) == std::weak_ordering::greater);
  CHECK(compare(ExtNonNeg::approx(1.0 + 1e-12), ExtNonNeg::exact(1)) ==
        std::weak_ordering::equivalent);
  CHECK(compare(ExtNonNeg::exact(Rational(1, 3)), ExtNonNeg::exact(Rational(1, 2))) ==
        std::weak_ordering::less);
  CHECK_THROWS_AS(ExtNonNeg::exact(-1), DomainError);
}

TEST_CASE("parse_ext reads exact decimals and fractions") {
  CHECK(parse_ext("0.25") == ExtNonNeg::exact(Rational(1, 4)));
  CHECK(parse_ext("3/6") == ExtNonNeg::exact(Rational(1, 2)));
  CHECK(parse_ext("1e2") == ExtNonNeg::exact(100));
  CHECK(parse_ext("inf").is_infinite());
  CHECK_THROWS(parse_ext("abc"));
  CHECK(ExtNonNeg::exact(Rational(5, 2)).to_string() == "5/2");
}

namespace {

ExtNonNeg random_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> num(1, 50);
  const int kind = pick(rng);
  if (kind == 0) return ExtNonNeg::infinity();
  if (kind <= 5) return ExtNonNeg::exact(Rational(num(rng), num(rng)));
  return ExtNonNeg::approx(num(rng) / 7.0);
}

}  // namespace

TEST_CASE("ext_mul is commutative and associative on mixed inputs") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto x = random_value(rng);
    const auto y = random_value(rng);
    const auto z = random_value(rng);
    CHECK(compare(ext_mul(x, y), ext_mul(y, x)) == std::weak_ordering::equivalent);
    CHECK(compare(ext_mul(ext_mul(x, y), z), ext_mul(x, ext_mul(y, z))) ==
          std::weak_ordering::equivalent);
  }
}

TEST_CASE("BasePower arithmetic") {
  const BasePower a(2, 3);
  const BasePower b(2, -5);
  CHECK((a * b).exponent() == -2);
  CHECK(a > b);
  CHECK((a * BasePower::zero(2)).is_zero());
  CHECK(BasePower::zero(2) < b);
  CHECK(a.value() == ExtNonNeg::exact(8));
  CHECK(BasePower(2, 6).root(3)->exponent() == 2);
  CHECK_FALSE(BasePower(2, 7).root(3).has_value());
  CHECK_THROWS(a * BasePower(3, 1));
  CHECK_THROWS(BasePower(1, 1));
}

TEST_CASE("BasePower survives a float round trip for |exponent| <= 512") {
  for (int e = -512; e <= 512; ++e) {
    const BasePower p(2, e);
    const auto back = BasePower::from_double(2, p.to_double());
    REQUIRE(back.has_value());
    CHECK(back->exponent() == e);
  }
}
