#include "circspec/lattice.hpp"

#include "doctest.h"
#include "support/generators.hpp"

#include <map>
#include <random>

using namespace circspec;
using namespace circspec::lattice;
namespace seq = circspec::sequences;

namespace {

RawField example_raw(std::int64_t rho) {
  RawField raw;
  raw.n = 2;
  raw.box = rho;
  raw.entries.emplace_back(MultiIndex{1, 0}, ExtNonNeg::exact(2));
  return raw;
}

// Value of a raw field at any index of the cone, read literally.
struct Literal {
  const RawField& raw;
  std::map<MultiIndex, Rational> entries;
  explicit Literal(const RawField& r) : raw(r) {
    for (const auto& [i, a] : r.entries) entries[i] = a.rational();
  }
  Rational operator()(MultiIndex i) const {
    if (raw.tail == TailKind::clamp) {
      for (auto& x : i) x = std::min(x, raw.box);
    }
    auto it = entries.find(i);
    return it == entries.end() ? raw.default_value.rational() : it->second;
  }
};

// sup over m in [0, w]^n of a_{m+i}/a_m, skipping both-zero pairs.
ExtNonNeg oracle_C(const RawField& raw, const MultiIndex& i, std::int64_t w) {
  const Literal a(raw);
  const auto n = raw.n;
  bool any = false;
  bool infinite = false;
  Rational best = 0;
  MultiIndex m(n, 0);
  while (true) {
    const MultiIndex t = m + i;
    if (is_nonnegative(t)) {
      const Rational num = a(t);
      const Rational den = a(m);
      if (!(num == 0 && den == 0)) {
        any = true;
        if (den == 0) {
          infinite = true;
        } else {
          best = std::max(best, Rational(num / den));
        }
      }
    }
    std::size_t k = n;
    bool done = true;
    while (k > 0) {
      --k;
      if (++m[k] <= w) {
        done = false;
        break;
      }
      m[k] = 0;
    }
    if (done) break;
  }
  if (!any || infinite) return ExtNonNeg::infinity();
  return ExtNonNeg::exact(best);
}

std::vector<MultiIndex> cube(std::size_t n, std::int64_t r) {
  std::vector<MultiIndex> out;
  MultiIndex p(n, -r);
  while (true) {
    out.push_back(p);
    std::size_t k = n;
    bool done = true;
    while (k > 0) {
      --k;
      if (++p[k] <= r) {
        done = false;
        break;
      }
      p[k] = -r;
    }
    if (done) break;
  }
  return out;
}

}  // namespace

TEST_CASE("multi-index helpers") {
  CHECK(unit(3, 1, -1) == MultiIndex{0, -1, 0});
  CHECK(MultiIndex{1, 2} + MultiIndex{3, -4} == MultiIndex{4, -2});
  CHECK(sign_of(-5) == -1);
  CHECK(sign_of(0) == 0);
  CHECK(graded_less(MultiIndex{0, 1}, MultiIndex{1, 0}));
  CHECK(graded_less(MultiIndex{1, 0}, MultiIndex{0, 2}));
  CHECK(to_string(MultiIndex{2, -1}) == "(2,-1)");
  CHECK(Domain::with_free_axes({false, true}).contains(MultiIndex{0, -3}));
  CHECK_FALSE(Domain::with_free_axes({false, true}).contains(MultiIndex{-1, 0}));
}

TEST_CASE("validate_field on the two-variable example") {
  const auto field = validate_field(example_raw(4));
  CHECK(field.values.exact());
  CHECK(field.values.at({1, 0}) == ExtNonNeg::exact(2));
  CHECK(field.values.at({7, 3}) == ExtNonNeg::one());
  CHECK(field.values.base() == Rational(2));
}

TEST_CASE("validation reports a witness pair") {
  RawField raw;
  raw.n = 2;
  raw.box = 3;
  raw.entries.emplace_back(MultiIndex{1, 1}, ExtNonNeg::exact(3));
  try {
    validate_field(raw);
    FAIL("expected a violation");
  } catch (const ValidationError& e) {
    CHECK(e.violation().kind == ViolationKind::not_submultiplicative);
    CHECK(e.violation().i == MultiIndex{1, 0});
    CHECK(e.violation().j == MultiIndex{0, 1});
  }
  RawField bad = example_raw(2);
  bad.entries.emplace_back(MultiIndex{0, 0}, ExtNonNeg::exact(2));
  CHECK_THROWS_AS(validate_field(bad), ValidationError);
  RawField zeros;
  zeros.n = 2;
  zeros.box = 2;
  zeros.tail = TailKind::clamp;
  zeros.entries.emplace_back(MultiIndex{1, 0}, ExtNonNeg::zero());
  try {
    validate_field(zeros);
    FAIL("expected a violation");
  } catch (const ValidationError& e) {
    CHECK(e.violation().kind == ViolationKind::zero_not_propagated);
  }
}

TEST_CASE("C values of the two-variable example") {
  const auto field = validate_field(example_raw(6));
  CHECK(compute_C_multi(field, {2, -1}).value == ExtNonNeg::one());
  CHECK(compute_C_multi(field, {-1, 1}).value == ExtNonNeg::one());
  CHECK(compute_C_multi(field, {1, 0}).value == ExtNonNeg::exact(2));
  CHECK(compute_C_multi(field, {-1, 0}).value == ExtNonNeg::exact(2));
  CHECK(compute_C_multi(field, {0, -1}).value == ExtNonNeg::exact(2));
  CHECK(compute_C_multi(field, {0, 0}).value == ExtNonNeg::one());
  CHECK(compute_C_multi(field, {2, -1}).exact);

  const auto c = compute_C_field(field);
  for (const auto& i : cube(2, 9)) {
    const bool two = i[0] <= 1 && i[1] <= 0 && !is_zero(i);
    CHECK(c.at(i).value == ExtNonNeg::exact(two ? 2 : 1));
    CHECK(c.at(i).exact);
  }
  CHECK(compare(c.at({1, 0}).value, ext_mul(c.at({2, -1}).value, c.at({-1, 1}).value)) ==
        std::weak_ordering::greater);
}

TEST_CASE("C field agrees with a literal windowed scan") {
  const auto raw = example_raw(3);
  const auto c = compute_C_field(validate_field(raw));
  for (const auto& i : cube(2, 6)) CHECK(c.at(i).value == oracle_C(raw, i, 14));
}

TEST_CASE("compute_A") {
  const auto field = validate_field(example_raw(4));
  const auto a = compute_A(field, {1, 2});
  CHECK(std::find(a.begin(), a.end(), zero_index(2)) != a.end());
  const auto b = compute_A(field, {0, -1});
  CHECK(std::find(b.begin(), b.end(), MultiIndex{0, 1}) != b.end());
  RawField nil;
  nil.n = 2;
  nil.box = 2;
  nil.default_value = ExtNonNeg::zero();
  nil.tail = TailKind::clamp;
  nil.entries.emplace_back(MultiIndex{0, 0}, ExtNonNeg::one());
  const auto zf = validate_field(nil);
  CHECK(compute_A(zf, {1, -1}).empty());
  const auto c = compute_C_multi(zf, {1, -1});
  CHECK(c.value.is_infinite());
  CHECK(c.empty_in_window);
}

TEST_CASE("infer_S") {
  const auto example = infer_S(validate_field(example_raw(4)));
  CHECK(example.S == AxisSet{true, true});
  CHECK(example.exact);
  CHECK_FALSE(example.declared);

  const auto unbounded = infer_S(from_sequence(seq::gen_unbounded_ratio(2, 256)));
  CHECK(unbounded.S == AxisSet{false});
  CHECK_FALSE(unbounded.exact);

  RawField row;
  row.n = 2;
  row.box = 2;
  row.tail = TailKind::clamp;
  row.entries.emplace_back(MultiIndex{2, 0}, ExtNonNeg::zero());
  row.entries.emplace_back(MultiIndex{2, 1}, ExtNonNeg::zero());
  row.entries.emplace_back(MultiIndex{2, 2}, ExtNonNeg::zero());
  CHECK(infer_S(validate_field(row)).S == AxisSet{false, true});

  RawField declared = example_raw(3);
  declared.declared_S = AxisSet{true, false};
  const auto d = infer_S(validate_field(declared));
  CHECK(d.declared);
  CHECK(d.S == AxisSet{true, false});
}

TEST_CASE("check_pair_condition") {
  CHECK(check_pair_condition({1, 2}, {0, 3}, 6));
  CHECK(check_pair_condition({2, -1}, {0, -1}, 6));
  CHECK(check_pair_condition({2, -1}, {1, 0}, 6));
  CHECK_FALSE(check_pair_condition({2, -1}, {-1, 1}, 6));
}

TEST_CASE("corollary_bound") {
  const auto c = compute_C_field(validate_field(example_raw(4)));
  CHECK(corollary_bound(c, {0, 0}, {2, -1}) == ExtNonNeg::exact(8));
  CHECK(corollary_bound(c, {1, 1}, {0, 0}) == c.at({1, 1}).value);
  CHECK(corollary_bound(c, {0, 0}, {1, 0}) == ExtNonNeg::exact(2));
}

TEST_CASE("one-variable fields match the sequence routines") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = trial % 2 ? testing::random_ceiling_sequence(rng, 40)
                             : testing::random_rational_sequence(rng, 40);
    const auto f = from_sequence(s);
    for (std::int64_t i = -20; i <= 20; ++i) {
      const auto a = compute_C_multi(f, {i}, 40);
      const auto b = seq::compute_C(s, i, 40);
      CHECK(a.value == b.value);
      CHECK(a.exact == b.exact);
    }
  }
  // Violations are detected identically.
  const auto bad = seq::RawSequence::from_values({ExtNonNeg::one(), ExtNonNeg::exact(2), ExtNonNeg::exact(5)});
  CHECK(seq::find_violation(bad).has_value());
  RawField raw;
  raw.n = 1;
  raw.box = 2;
  raw.tail = TailKind::truncated;
  raw.entries.emplace_back(MultiIndex{1}, ExtNonNeg::exact(2));
  raw.entries.emplace_back(MultiIndex{2}, ExtNonNeg::exact(5));
  CHECK(find_violation(materialize(raw)).has_value());
}

TEST_CASE("random fields: C = a on the cone, oracle agreement, inequalities") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    testing::FieldOptions opt;
    opt.n = 2;
    opt.rho = 2 + trial % 2;
    opt.powers = trial % 3 != 0;
    opt.zeros = trial % 5 == 4;
    const auto raw = testing::random_field(rng, opt);
    const auto field = validate_field(raw);
    const auto c = compute_C_field(field);
    for (const auto& i : field.values.indices_in_box(opt.rho)) CHECK(c.at(i).value == field.values.at(i));
    for (const auto& i : cube(2, opt.rho + 1)) {
      const auto oracle = oracle_C(raw, i, 4 * (opt.rho + 2));
      CHECK(c.at(i).value == oracle);
    }
    const auto idx = c.indices();
    for (const auto& m : idx) {
      for (const auto& i : idx) {
        const auto s = m + i;
        if (!c.M().contains(s)) continue;
        CHECK(leq(c.at(s).value, corollary_bound(c, m, i)));
        if (check_pair_condition(m, i, 2 * opt.rho + 2)) {
          CHECK(leq(c.at(s).value, ext_mul(c.at(m).value, c.at(i).value)));
        }
      }
    }
  }
}

TEST_CASE("clamping fields compress to their smallest radii") {
  const auto c = compute_C_field(validate_field(example_raw(5)));
  CHECK(c.values.radii() == std::vector<std::int64_t>{2, 1});
}
