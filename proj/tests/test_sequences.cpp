#include "circspec/sequences.hpp"

#include "doctest.h"

#include <algorithm>
#include <map>

using namespace circspec;
using namespace circspec::sequences;

namespace {

RawSequence ints(std::initializer_list<std::int64_t> xs) {
  std::vector<ExtNonNeg> v;
  for (auto x : xs) v.push_back(ExtNonNeg::exact(x));
  return RawSequence::from_values(std::move(v));
}

std::vector<std::int64_t> exponents_of(const NormSequence& s) {
  return s.power_form()->exponents;
}

// Literal transcriptions of the two recursions, kept independent of the
// incremental bookkeeping in the library (no running maxima, no run tracking).
std::vector<std::int64_t> oracle_unbounded(std::int64_t last) {
  std::vector<std::int64_t> e{0, 1, 2};
  for (std::int64_t n = 3; n <= last; ++n) {
    const auto max_prefix = *std::max_element(e.begin() + 1, e.begin() + (n - 1));
    if (e[n - 1] <= max_prefix) {
      std::int64_t best = INT64_MAX;
      for (std::int64_t i = 1; i < n; ++i) best = std::min(best, e[i] + e[n - i]);
      e.push_back(best);
    } else {
      e.push_back(1);
    }
  }
  return e;
}

std::vector<std::int64_t> oracle_inner(std::int64_t last) {
  std::vector<std::int64_t> e{0, 1, 2};
  for (std::int64_t n = 3; n <= last; ++n) {
    std::optional<std::int64_t> forced;
    for (std::int64_t k = 1; k <= n - 1; ++k) {
      const std::int64_t m = e[n - k];
      std::int64_t max_before = 0;
      for (std::int64_t t = 1; t < n - k; ++t) max_before = std::max(max_before, e[t]);
      if (m > 1 && m > max_before && k <= m - 1) forced = m - k;
    }
    if (forced) {
      e.push_back(*forced);
    } else {
      std::int64_t best = INT64_MAX;
      for (std::int64_t i = 1; i < n; ++i) best = std::min(best, e[i] + e[n - i]);
      e.push_back(best);
    }
  }
  return e;
}

RawSequence raw_of(const NormSequence& s) {
  std::vector<std::optional<std::int64_t>> e(s.power_form()->exponents.begin(),
                                             s.power_form()->exponents.end());
  return RawSequence::from_exponents(s.power_form()->base, std::move(e));
}

}  // namespace

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(ints({1, 2, 4, 2, 4, 8})));

  auto v = find_violation(ints({1, 1, 3}));
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::not_submultiplicative);
  CHECK(v->i == 1);
  CHECK(v->j == 1);

  v = find_violation(ints({2, 1}));
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::not_normalized);

  v = find_violation(ints({1, 0, 1}));
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::zero_not_propagated);
  CHECK(v->i == 1);
  CHECK(v->j == 2);

  CHECK_THROWS_AS(validate(ints({1, 3, 10})), ValidationError);
}

TEST_CASE("exponent-form input uses null for zero terms") {
  auto raw = RawSequence::from_exponents(2, {std::nullopt, 1, std::nullopt, std::nullopt});
  // position 0 is 1 by convention only when given as exponent 0
  CHECK(find_violation(raw)->kind == ViolationKind::not_normalized);
  raw = RawSequence::from_exponents(2, {0, 1, std::nullopt, std::nullopt});
  const auto seq = validate(raw);
  CHECK(seq.first_zero() == 2);
}

TEST_CASE("gen_unbounded_ratio") {
  CHECK(exponents_of(gen_unbounded_ratio(2, 2)) == std::vector<std::int64_t>{0, 1, 2});
  const auto seq = gen_unbounded_ratio(2, 9);
  std::vector<ExtNonNeg> expected;
  for (auto x : {1, 2, 4, 2, 4, 8, 2, 4, 8, 4}) expected.push_back(ExtNonNeg::exact(x));
  CHECK(seq.values() == expected);
  CHECK(inverse_norm_lower_bound(seq) == ExtNonNeg::exact(4));
  // attained at a_5 / a_6 = 8 / 2
  CHECK(ext_div(seq[5], seq[6]) == ExtNonNeg::exact(4));
}

TEST_CASE("generators agree with literal recursions") {
  CHECK(exponents_of(gen_unbounded_ratio(3, 400)) == oracle_unbounded(400));
  CHECK(exponents_of(gen_inner_radius(Rational(1, 3), 300)) == oracle_inner(300));
}

TEST_CASE("gen_inner_radius") {
  const auto one = gen_inner_radius(1, 4);
  CHECK(one.values() == std::vector<ExtNonNeg>(5, ExtNonNeg::one()));
  CHECK(exponents_of(gen_inner_radius(Rational(1, 5), 2)) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(exponents_of(gen_inner_radius(Rational(1, 5), 7)) ==
        std::vector<std::int64_t>{0, 1, 2, 1, 2, 3, 2, 1});
  CHECK_THROWS(gen_inner_radius(0, 5));
  CHECK_THROWS(gen_inner_radius(Rational(3, 2), 5));
}

TEST_CASE("compute_C") {
  const auto c = compute_C(constant_sequence(10), -1, 10);
  CHECK(c.exact);
  CHECK(c.value == ExtNonNeg::one());

  const Rational R = 3;
  const auto inner = gen_inner_radius(1 / R, 20);
  const auto c2 = compute_C(inner, -2, 20);
  CHECK(c2.exact);
  CHECK(c2.value == ExtNonNeg::exact(9));

  const auto c3 = compute_C(gen_unbounded_ratio(2, 9), -1, 9);
  CHECK_FALSE(c3.exact);
  CHECK(c3.sense == Sense::lower);
  CHECK(c3.value == ExtNonNeg::exact(4));

  CHECK_THROWS_AS(compute_C(validate(ints({1, 1, 0, 0})), -1, 3), ZeroTerm);
  CHECK(compute_C(validate(ints({1, 1, 0, 0})), 2, 3).value == ExtNonNeg::zero());
}

TEST_CASE("annulus") {
  const auto circle = annulus(constant_sequence(16), 16);
  CHECK(circle.inner.value == ExtNonNeg::one());
  CHECK(circle.outer.value == ExtNonNeg::one());
  CHECK(circle.inner.exact);

  const auto zero = annulus(validate(ints({1, 0, 0, 0})), 3);
  CHECK(zero.degenerate);
  CHECK(zero.inner.value == ExtNonNeg::zero());
  CHECK(zero.outer.value == ExtNonNeg::zero());

  const auto scaled = annulus(scale(constant_sequence(12), 3), 12);
  CHECK(scaled.inner.value == ExtNonNeg::exact(3));
  CHECK(scaled.outer.value == ExtNonNeg::exact(3));

  const auto inner = annulus(gen_inner_radius(Rational(1, 2), 64), 32);
  CHECK(inner.inner.exact);
  CHECK(inner.inner.value == ExtNonNeg::exact(Rational(1, 2)));
  CHECK(leq(inner.inner.value, inner.outer.value));
}

TEST_CASE("annulus flags an unbounded C_{-1} trend") {
  const auto user = validate(raw_of(gen_unbounded_ratio(2, 2000)));
  CHECK(unbounded_trend(user));
  const auto a = annulus(user, 100);
  CHECK(a.unbounded_suspected);
  CHECK(a.inner.value == ExtNonNeg::zero());
  CHECK_FALSE(unbounded_trend(validate(raw_of(gen_inner_radius(Rational(1, 2), 2000)))));
}

TEST_CASE("scale") {
  const auto s = scale(constant_sequence(3), 3);
  std::vector<ExtNonNeg> expected;
  for (auto x : {1, 3, 9, 27}) expected.push_back(ExtNonNeg::exact(x));
  CHECK(s.values() == expected);
  const auto base = gen_unbounded_ratio(2, 30);
  CHECK(scale(base, 1).values() == base.values());
}

TEST_CASE("annulus radii scale exactly with the sequence") {
  for (const Rational factor : {Rational(2), Rational(1, 3), Rational(5, 4)}) {
    for (const auto& seq : {constant_sequence(20), gen_inner_radius(Rational(1, 3), 40)}) {
      const auto a = annulus(seq, 20);
      const auto b = annulus(scale(seq, factor), 20);
      CHECK(b.inner.value == ext_mul(ExtNonNeg::exact(factor), a.inner.value));
      if (a.outer.value.is_exact() && b.outer.value.is_exact()) {
        CHECK(b.outer.value == ext_mul(ExtNonNeg::exact(factor), a.outer.value));
      } else {
        CHECK(b.outer.value.to_double() ==
              doctest::Approx(factor.convert_to<double>() * a.outer.value.to_double()));
      }
    }
  }
  // user data: windowed roots scale within tolerance
  const auto user = validate(ints({1, 3, 5, 9, 14, 20}));
  const auto a = annulus(user, 5);
  const auto b = annulus(scale(user, 2), 5);
  CHECK(b.outer.value.to_double() == doctest::Approx(2 * a.outer.value.to_double()));
  CHECK(b.inner.value.to_double() == doctest::Approx(2 * a.inner.value.to_double()));
}

TEST_CASE("inverse_norm_lower_bound") {
  CHECK(inverse_norm_lower_bound(constant_sequence(7)) == ExtNonNeg::one());
  for (std::int64_t n : {3, 10, 100}) {
    CHECK(inverse_norm_lower_bound(gen_inner_radius(Rational(1, 7), n)) == ExtNonNeg::exact(7));
  }
}

TEST_CASE("circle_possible") {
  CHECK(circle_possible(constant_sequence(8), 8) == Tristate::yes);
  CHECK(circle_possible(gen_inner_radius(Rational(1, 2), 30), 10) == Tristate::no);
  CHECK(circle_possible(validate(ints({1, 2, 3, 5})), 3) == Tristate::undetermined);
  CHECK(circle_possible(gen_unbounded_ratio(2, 30), 10) == Tristate::no);
}

TEST_CASE("generated prefixes are submultiplicative (exact pair scan)") {
  for (const Rational R : {Rational(2), Rational(3), Rational(10)}) {
    CHECK_FALSE(find_violation(raw_of(gen_unbounded_ratio(R, 10000))).has_value());
    CHECK_FALSE(find_violation(raw_of(gen_inner_radius(1 / R, 10000))).has_value());
  }
}

TEST_CASE("compute_C equals a_i for nonnegative i") {
  const auto seq = gen_unbounded_ratio(2, 200);
  for (std::int64_t i = 0; i <= 200; ++i) {
    const auto c = compute_C(seq, i, 200);
    CHECK(c.exact);
    CHECK(c.value == seq[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("inner radius generator: ratio bound and windowed C_{-k} attainment") {
  for (const Rational R : {Rational(2), Rational(3)}) {
    const auto seq = gen_inner_radius(1 / R, 400);
    const auto& e = seq.power_form()->exponents;
    for (std::size_t n = 1; n < e.size(); ++n) CHECK(e[n - 1] - e[n] <= 1);
    // first instances of R^m
    std::map<std::int64_t, std::int64_t> first;
    for (std::size_t n = 1; n < e.size(); ++n) first.emplace(e[n], static_cast<std::int64_t>(n));
    CHECK(first[3] == 5);
    CHECK(first[6] == 58);
    const auto user = validate(raw_of(seq));
    for (std::int64_t k = 1; k <= 5; ++k) {
      const std::int64_t reach = first[k + 1] + k;
      CHECK(compute_C(user, -k, reach).value == ExtNonNeg::exact(rational_pow(R, k)));
      CHECK(compute_C(user, -k, 400).value == ExtNonNeg::exact(rational_pow(R, k)));
    }
  }
}

TEST_CASE("unbounded generator: every exponent appears and the ratio bound grows") {
  const auto seq = gen_unbounded_ratio(2, 4096);
  const auto& e = seq.power_form()->exponents;
  const auto top = *std::max_element(e.begin(), e.end());
  for (std::int64_t v = 0; v <= top; ++v) CHECK(std::find(e.begin(), e.end(), v) != e.end());
  ExtNonNeg previous = ExtNonNeg::zero();
  for (std::int64_t w = 8; w <= 4096; w *= 2) {
    const auto bound = inverse_norm_lower_bound(truncate(seq, w));
    CHECK(leq(previous, bound));
    if (w >= 64) CHECK(compare(bound, previous) == std::weak_ordering::greater);
    previous = bound;
  }
}

TEST_CASE("closed-form C collection satisfies C_{i+j} <= C_i C_j") {
  for (const Rational R : {Rational(2), Rational(3)}) {
    const auto c = two_sided_C(gen_inner_radius(1 / R, 200), 100);
    REQUIRE(c);
    auto at = [&](std::int64_t i) { return (*c)[static_cast<std::size_t>(i + 100)]; };
    CHECK(at(0) == ExtNonNeg::one());
    for (std::int64_t i = -50; i <= 50; ++i) {
      for (std::int64_t j = -50; j <= 50; ++j) {
        CHECK(leq(at(i + j), ext_mul(at(i), at(j)), 0.0));
      }
    }
  }
}
