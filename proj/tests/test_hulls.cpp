#include "circspec/hulls.hpp"

#include "doctest.h"
#include "support/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace circspec;
using namespace circspec::lattice;
using namespace circspec::hulls;
namespace seq = circspec::sequences;

namespace {

NormField example_field(std::int64_t rho) {
  RawField raw;
  raw.n = 2;
  raw.box = rho;
  raw.entries.emplace_back(MultiIndex{1, 0}, ExtNonNeg::exact(2));
  return validate_field(raw);
}

HullSpec example_hull(std::int64_t rho) {
  auto c = compute_C_field(example_field(rho));
  c.box = rho;
  return rational_hull(c);
}

// Moduli k/16 for k = 1..64 on every axis.
std::vector<std::vector<Rational>> grid2() {
  std::vector<std::vector<Rational>> out;
  for (int a = 1; a <= 64; ++a) {
    for (int b = 1; b <= 64; ++b) out.push_back({Rational(a, 16), Rational(b, 16)});
  }
  return out;
}

Point from_moduli(const std::vector<Rational>& r) {
  Point s;
  for (const auto& x : r) s.emplace_back(x.convert_to<double>(), 0.0);
  return s;
}

double monomial_modulus(const Point& s, const MultiIndex& i) {
  double v = 1;
  for (std::size_t k = 0; k < s.size(); ++k) v *= std::pow(std::abs(s[k]), static_cast<double>(i[k]));
  return v;
}

}  // namespace

TEST_CASE("spec construction") {
  const auto h = HullSpec(2, HullKind::polynomial, {{{0, 2}, ExtNonNeg::one()}, {{1, 0}, ExtNonNeg::exact(2)}});
  CHECK(h.constraints().front().index == MultiIndex{1, 0});
  CHECK_FALSE(h.bounded());
  CHECK_THROWS_AS(HullSpec(2, HullKind::polynomial, {{{-1, 0}, ExtNonNeg::one()}}), std::invalid_argument);
  CHECK_THROWS_AS(HullSpec(2, HullKind::polynomial, {{{1, 0}, ExtNonNeg::one()}, {{1, 0}, ExtNonNeg::one()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HullSpec(2, HullKind::rational, {{{-1, 0}, ExtNonNeg::one()}}, {false, true}),
                  std::invalid_argument);
  CHECK_NOTHROW(HullSpec(2, HullKind::rational, {{{1, -1}, ExtNonNeg::one()}}, {false, true}));
}

TEST_CASE("example hull membership and separation") {
  const auto h = example_hull(6);
  CHECK(h.bounded());
  CHECK(membership(h, {1.0, 1.0}));
  CHECK(membership_direct(h, {1.0, 1.0}));
  const Point s{2.0, 0.4};
  CHECK_FALSE(membership(h, s));
  CHECK_FALSE(membership_direct(h, s));
  // |s^(2,-1)| = 4 / 0.4 = 10 exceeds C_(2,-1) = 1.
  CHECK(monomial_modulus(s, {2, -1}) == doctest::Approx(10));
  const auto violated = violated_monomials(h, s);
  CHECK(std::find(violated.begin(), violated.end(), MultiIndex{2, -1}) != violated.end());
  // The first violated constraint in graded order.
  const auto sep = separating_monomial(h, s);
  REQUIRE(sep.has_value());
  CHECK(*sep == MultiIndex{0, -1});
  CHECK(*sep == violated.front());
  CHECK_FALSE(separating_monomial(h, {std::polar(1.0, 0.3), std::polar(1.0, -2.0)}).has_value());
}

TEST_CASE("zero coordinates") {
  const auto h = example_hull(3);
  // -e_1 has a finite bound, so s_1 = 0 is excluded.
  CHECK_FALSE(membership(h, {0.0, 1.0}));
  CHECK_FALSE(membership_direct(h, {0.0, 1.0}));
  CHECK(*separating_monomial(h, {0.0, 1.0}) == MultiIndex{-1, 0});
  // Polynomial hulls contain the coordinate axes near 0.
  const auto p = polynomial_hull(example_field(3), 3);
  CHECK(membership(p, {0.0, 0.5}));
  CHECK(membership_direct(p, {0.0, 0.5}));
  CHECK(membership_exact(p, {Rational(0), Rational(1, 2)}));
  CHECK(membership(HullSpec(1, HullKind::polynomial, {{{1}, ExtNonNeg::zero()}}), {0.0}));
  CHECK_FALSE(membership(HullSpec(1, HullKind::polynomial, {{{1}, ExtNonNeg::zero()}}), {1e-3}));
}

TEST_CASE("n=1 disc hull and its separating power") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_rational_sequence(rng, 24);
    const auto h = disc_hull(a);
    const auto r = seq::radius_estimate(a, a.last_index()).value;
    const auto section = section_interval(h, {Rational(0)}, 0);
    CHECK(section.upper == r);
    CHECK(section.lower == ExtNonNeg::zero());
    const double outside = r.to_double() + 0.1;
    std::optional<std::int64_t> expected;
    for (std::int64_t k = 1; k <= a.last_index() && !expected; ++k) {
      if (std::pow(outside, static_cast<double>(k)) > a.values()[static_cast<std::size_t>(k)].to_double())
        expected = k;
    }
    REQUIRE(expected.has_value());
    const auto sep = separating_monomial(h, {outside});
    REQUIRE(sep.has_value());
    CHECK((*sep)[0] == *expected);
  }
}

TEST_CASE("n=1 rational hull section matches the annulus") {
  for (const Rational radius : {Rational(1, 2), Rational(1, 3)}) {
    const auto a = seq::gen_inner_radius(radius, 400);
    const std::int64_t w = 12;
    const auto c = seq::two_sided_C(a, w);
    REQUIRE(c.has_value());
    std::vector<Constraint> cons;
    for (std::int64_t i = -w; i <= w; ++i) {
      if (i != 0) cons.push_back({{i}, (*c)[static_cast<std::size_t>(i + w)]});
    }
    const HullSpec h(1, HullKind::rational, cons, {true});
    const auto section = section_interval(h, {Rational(1)}, 0);
    const auto ann = seq::annulus(a, w);
    CHECK(section.lower == ann.inner.value);
    CHECK(section.upper == ann.outer.value);
    CHECK(section.lower == ExtNonNeg::exact(radius));
  }
}

TEST_CASE("cross sections") {
  const auto h = disc_hull(seq::constant_sequence(16));
  for (const auto& row : cross_section(h, {0.0}, 0, 0.0, 2.0, 201)) CHECK(row.inside == (row.modulus <= 1.0 + 1e-12));
  // The windowed C-hull of the example is the torus: at |s2| = 1 only |s1| = 1.
  const auto p = example_hull(3);
  const auto section = section_interval(p, {Rational(1), Rational(1)}, 0);
  CHECK(section.lower == ExtNonNeg::one());
  CHECK(section.upper == ExtNonNeg::one());
  for (const auto& row : cross_section(p, {1.0, 1.0}, 0, 0.25, 2.0, 8)) CHECK(row.inside == (row.modulus == 1.0));
  CHECK_THROWS_AS(cross_section(p, {1.0, 0.0}, 0, 0.5, 2.0, 8), std::invalid_argument);
  // Brute force over the constraint set at |s2| = 1.
  for (int k = 1; k <= 64; ++k) {
    const Rational m(k, 32);
    bool inside = true;
    for (const auto& c : p.constraints()) {
      inside = inside && leq(ExtNonNeg::exact(rational_pow(m, c.index[0])), c.bound);
    }
    CHECK(inside == (m == 1));
    CHECK(membership_exact(p, {m, Rational(1)}) == inside);
  }
}

TEST_CASE("direct and log-space membership agree; circled invariance") {
  std::mt19937_64 rng(2024);
  std::vector<HullSpec> specs{example_hull(3), polynomial_hull(example_field(3), 3)};
  for (int t = 0; t < 8; ++t) {
    testing::FieldOptions opt;
    opt.rho = 2 + t % 2;
    opt.zeros = t % 3 == 2;
    opt.powers = t % 2 == 0;
    const auto field = validate_field(testing::random_field(rng, opt));
    specs.push_back(polynomial_hull(field, opt.rho));
    specs.push_back(rational_hull(compute_C_field(field)));
  }
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (const auto& h : specs) {
    for (int p = 0; p < 1000; ++p) {
      auto s = testing::random_point(rng, h.dim(), 1.0);
      const bool in = membership(h, s);
      CHECK(in == membership_direct(h, s));
      for (int r = 0; r < 5; ++r) {
        for (auto& z : s) z *= std::polar(1.0, phase(rng));
        CHECK(membership(h, s) == in);
      }
    }
  }
}

TEST_CASE("exact membership on a rational grid") {
  const auto h = example_hull(3);
  for (const auto& r : grid2()) {
    const bool exact = membership_exact(h, r);
    CHECK(exact == (r[0] == 1 && r[1] == 1));
    CHECK(exact == membership(h, from_moduli(r)));
  }
}

TEST_CASE("constraint reduction") {
  const HullSpec disc(1, HullKind::polynomial,
                      {{{1}, ExtNonNeg::exact(2)}, {{2}, ExtNonNeg::exact(4)}, {{3}, ExtNonNeg::exact(8)}});
  const auto r = reduce_constraints(disc);
  REQUIRE(r.constraints().size() == 1);
  CHECK(r.constraints()[0].index == MultiIndex{1});
  CHECK(reduce_constraints(HullSpec(2, HullKind::polynomial, {})).constraints().empty());
  const HullSpec with_inf(1, HullKind::polynomial, {{{1}, ExtNonNeg::exact(2)}, {{2}, ExtNonNeg::infinity()}});
  CHECK(reduce_constraints(with_inf).constraints().size() == 1);

  const auto p = example_hull(3);
  const auto q = reduce_constraints(p);
  CHECK(q.constraints().size() < p.constraints().size());
  CHECK(reduce_constraints(q).constraints().size() == q.constraints().size());
  for (const auto& g : grid2()) CHECK(membership_exact(q, g) == membership_exact(p, g));
}

TEST_CASE("reduction preserves random hulls on a log grid") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    testing::FieldOptions opt;
    opt.rho = 2 + t % 2;
    opt.zeros = t % 4 == 3;
    const auto field = validate_field(testing::random_field(rng, opt));
    for (const auto& h : {polynomial_hull(field, opt.rho), rational_hull(compute_C_field(field))}) {
      const auto q = reduce_constraints(h);
      CHECK(reduce_constraints(q).constraints().size() == q.constraints().size());
      for (int a = 0; a < 64; ++a) {
        for (int b = 0; b < 64; ++b) {
          const LogPoint u{-2.0 + 4.0 * a / 63, -2.0 + 4.0 * b / 63};
          CHECK(membership_log(q, u) == membership_log(h, u));
        }
      }
    }
  }
}

TEST_CASE("surrogate constraints give the same hull") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    testing::FieldOptions opt;
    opt.rho = 3;
    opt.powers = t % 2 == 0;
    const auto field = validate_field(testing::random_field(rng, opt));
    const auto h = polynomial_hull(field, 6);
    const auto s = surrogate_hull(field, 6, 6);
    REQUIRE(h.constraints().size() == s.constraints().size());
    for (std::size_t c = 0; c < h.constraints().size(); ++c) {
      CHECK(leq(s.constraints()[c].bound, h.constraints()[c].bound));
    }
    for (int a = 0; a < 64; ++a) {
      for (int b = 0; b < 64; ++b) {
        const LogPoint u{-2.0 + 2.5 * a / 63, -2.0 + 2.5 * b / 63};
        CHECK(membership_log(s, u) == membership_log(h, u));
      }
    }
  }
}

TEST_CASE("connectivity witnesses") {
  const auto p = example_hull(3);
  const Point one{1.0, 1.0};
  for (const auto& x : connectivity_witness(p, one, one, 10)) CHECK(x == one);
  const Point rotated{std::polar(1.0, 2.0), std::polar(1.0, -1.0)};
  const auto path = connectivity_witness(p, one, rotated, 100);
  CHECK(path.size() == 101);
  for (const auto& x : path) CHECK(membership(p, x));
  CHECK_THROWS_AS(connectivity_witness(p, one, {0.5, 1.0}, 100), MemberError);

  std::mt19937_64 rng(11);
  int paths = 0;
  for (int t = 0; t < 10; ++t) {
    testing::FieldOptions opt;
    opt.rho = 2;
    const auto field = validate_field(testing::random_field(rng, opt));
    const auto h = rational_hull(compute_C_field(field));
    std::vector<Point> inside;
    for (int tries = 0; tries < 20000 && inside.size() < 2; ++tries) {
      auto s = testing::random_point(rng, 2, 1.0);
      if (membership(h, s, 0.0)) inside.push_back(s);
    }
    if (inside.size() < 2) continue;
    ++paths;
    for (const auto& x : connectivity_witness(h, inside[0], inside[1], 100)) CHECK(membership(h, x));
  }
  CHECK(paths >= 5);
}

TEST_CASE("augmenting the spectrum") {
  const auto a = seq::gen_inner_radius(Rational(1, 2), 64);
  SpectrumModel model{disc_hull(a), {}};
  const std::vector<Point> K{{0.5}, {std::polar(0.9, 1.0)}, {0.0}};
  const auto grown = augment_spectrum(model, K);
  CHECK(grown.spectrum.size() == 3);
  CHECK(grown.norms.constraints().size() == model.norms.constraints().size());
  for (std::size_t c = 0; c < model.norms.constraints().size(); ++c) {
    CHECK(grown.norms.constraints()[c].bound == model.norms.constraints()[c].bound);
    for (const auto& s : K) {
      CHECK(std::pow(std::abs(s[0]), static_cast<double>(c + 1)) <=
            grown.norms.constraints()[c].bound.to_double() * (1 + 1e-9));
    }
  }
  CHECK(augment_spectrum(model, {}).spectrum.empty());
  try {
    augment_spectrum(model, {{1.5}});
    FAIL("expected HullViolation");
  } catch (const HullViolation& v) {
    CHECK(v.monomial() == *separating_monomial(model.norms, {1.5}));
    CHECK(v.point() == Point{1.5});
  }
}
