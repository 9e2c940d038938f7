#include "circspec/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace circspec::sequences {

namespace {

std::string describe(ViolationKind kind, std::int64_t i, std::int64_t j,
                     const std::vector<ExtNonNeg>& a) {
  std::ostringstream out;
  switch (kind) {
    case ViolationKind::not_normalized:
      out << "a_0 = " << a[0].to_string() << " but must equal 1";
      break;
    case ViolationKind::zero_not_propagated:
      out << "a_" << i << " = 0 but a_" << j << " = " << a[j].to_string();
      break;
    case ViolationKind::not_submultiplicative:
      out << "a_" << (i + j) << " = " << a[i + j].to_string() << " > a_" << i << " * a_" << j
          << " = " << a[i].to_string() << " * " << a[j].to_string();
      break;
  }
  return out.str();
}

Violation make_violation(ViolationKind kind, std::int64_t i, std::int64_t j,
                         const std::vector<ExtNonNeg>& a) {
  return Violation{kind, i, j, describe(kind, i, j, a)};
}

// Exact integer t with base^t == factor, if one exists.
std::optional<std::int64_t> exact_log(const Rational& base, const Rational& factor) {
  if (factor <= 0) return std::nullopt;
  const double estimate = std::log(factor.convert_to<double>()) /
                          std::log(base.convert_to<double>());
  if (!std::isfinite(estimate)) return std::nullopt;
  const auto t = static_cast<std::int64_t>(std::llround(estimate));
  for (auto cand : {t - 1, t, t + 1}) {
    if (rational_pow(base, cand) == factor) return cand;
  }
  return std::nullopt;
}

bool is_closed_form(const NormSequence& seq) {
  return seq.origin() == Origin::constant || seq.origin() == Origin::inner_radius;
}

// Closed-form C_i of constant and inner-radius sequences scaled by s:
// s^i for the constant sequence, R^k s^{-k} at i = -k for the inner radius one.
ExtNonNeg closed_form_C(const NormSequence& seq, std::int64_t i) {
  const Rational& s = seq.scale_factor();
  if (seq.origin() == Origin::constant) return ExtNonNeg::exact(rational_pow(s, i));
  // inner radius, i < 0
  return ExtNonNeg::exact(rational_pow(seq.generator_base() / s, -i));
}

// Windowed sup over n in [lo, window] of a_{n+i}/a_n for a zero-free range.
ExtNonNeg windowed_ratio_sup(const NormSequence& seq, std::int64_t i, std::int64_t window) {
  const std::int64_t lo = std::max<std::int64_t>(0, -i);
  if (const auto& pf = seq.power_form()) {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t n = lo; n <= window && n + i <= window; ++n) {
      best = std::max(best, pf->exponents[n + i] - pf->exponents[n]);
    }
    return ExtNonNeg::exact(rational_pow(pf->base, best));
  }
  ExtNonNeg best = ExtNonNeg::zero();
  for (std::int64_t n = lo; n <= window && n + i <= window; ++n) {
    best = ext_max(best, ext_div(seq[n + i], seq[n]));
  }
  return best;
}

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::not_normalized: return "not-normalized";
    case ViolationKind::not_submultiplicative: return "not-submultiplicative";
    case ViolationKind::zero_not_propagated: return "zero-not-propagated";
  }
  return "?";
}

const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    case Tristate::undetermined: return "undetermined";
  }
  return "?";
}

RawSequence RawSequence::from_values(std::vector<ExtNonNeg> values) {
  RawSequence raw;
  raw.values = std::move(values);
  return raw;
}

RawSequence RawSequence::from_exponents(Rational base,
                                        std::vector<std::optional<std::int64_t>> exponents) {
  if (base <= 1) throw std::invalid_argument("exponent form needs a base > 1");
  RawSequence raw;
  raw.values.reserve(exponents.size());
  for (const auto& e : exponents) {
    raw.values.push_back(e ? ExtNonNeg::exact(rational_pow(base, *e)) : ExtNonNeg::zero());
  }
  raw.base = std::move(base);
  raw.exponents = std::move(exponents);
  return raw;
}

std::optional<Violation> find_violation(const RawSequence& raw, double tol) {
  const auto& a = raw.values;
  if (a.empty()) throw std::invalid_argument("empty sequence");
  if (compare(a[0], ExtNonNeg::one(), tol) != std::weak_ordering::equivalent) {
    return make_violation(ViolationKind::not_normalized, 0, 0, a);
  }
  const auto n_terms = static_cast<std::int64_t>(a.size());
  std::int64_t first_zero = n_terms;
  for (std::int64_t n = 0; n < n_terms; ++n) {
    if (a[n].is_infinite()) throw std::invalid_argument("sequence terms must be finite");
    if (a[n].is_zero()) {
      if (first_zero == n_terms) first_zero = n;
    } else if (first_zero < n) {
      return make_violation(ViolationKind::zero_not_propagated, first_zero, n, a);
    }
  }
  // Pairs with i + j >= first_zero hold trivially once zeros propagate.
  const bool use_exponents = raw.base.has_value();
  for (std::int64_t n = 2; n < first_zero; ++n) {
    for (std::int64_t i = 1; i <= n / 2; ++i) {
      const std::int64_t j = n - i;
      bool ok = false;
      if (use_exponents) {
        ok = *raw.exponents[n] <= *raw.exponents[i] + *raw.exponents[j];
      } else {
        ok = leq(a[n], ext_mul(a[i], a[j]), tol);
      }
      if (!ok) return make_violation(ViolationKind::not_submultiplicative, i, j, a);
    }
  }
  return std::nullopt;
}

NormSequence validate(const RawSequence& raw) {
  if (auto v = find_violation(raw)) throw ValidationError(std::move(*v));
  NormSequence seq;
  seq.values_ = raw.values;
  seq.first_zero_ = seq.values_.size();
  for (std::size_t n = 0; n < seq.values_.size(); ++n) {
    if (seq.values_[n].is_zero()) {
      seq.first_zero_ = n;
      break;
    }
  }
  if (raw.base) {
    PowerForm form{*raw.base, {}};
    for (std::size_t n = 0; n < seq.first_zero_; ++n) form.exponents.push_back(*raw.exponents[n]);
    seq.power_ = std::move(form);
  }
  return seq;
}

NormSequence NormSequence::from_power_form(PowerForm form, Origin origin,
                                           Rational generator_base) {
  NormSequence seq;
  seq.values_.reserve(form.exponents.size());
  for (auto e : form.exponents) seq.values_.push_back(ExtNonNeg::exact(rational_pow(form.base, e)));
  seq.first_zero_ = seq.values_.size();
  seq.power_ = std::move(form);
  seq.origin_ = origin;
  seq.generator_base_ = std::move(generator_base);
  return seq;
}

NormSequence gen_unbounded_ratio(const Rational& base, std::int64_t last_index) {
  if (base <= 1) throw std::invalid_argument("base must exceed 1");
  if (last_index < 2) throw std::invalid_argument("window must be at least 2");
  std::vector<std::int64_t> e{0, 1, 2};
  e.reserve(static_cast<std::size_t>(last_index) + 1);
  std::int64_t max_before_prev = 1;  // max(e_1, ..., e_{n-2})
  for (std::int64_t n = 3; n <= last_index; ++n) {
    if (e[n - 1] <= max_before_prev) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (std::int64_t i = 1; i <= n / 2; ++i) best = std::min(best, e[i] + e[n - i]);
      e.push_back(best);
    } else {
      e.push_back(1);
    }
    max_before_prev = std::max(max_before_prev, e[n - 1]);
  }
  return NormSequence::from_power_form(PowerForm{base, std::move(e)}, Origin::unbounded_ratio,
                                       base);
}

NormSequence constant_sequence(std::int64_t last_index) {
  if (last_index < 0) throw std::invalid_argument("negative window");
  NormSequence seq;
  seq.values_.assign(static_cast<std::size_t>(last_index) + 1, ExtNonNeg::one());
  seq.first_zero_ = seq.values_.size();
  seq.origin_ = Origin::constant;
  return seq;
}

NormSequence gen_inner_radius(const Rational& radius, std::int64_t last_index) {
  if (radius <= 0 || radius > 1) throw std::invalid_argument("radius must lie in (0, 1]");
  if (radius == 1) return constant_sequence(last_index);
  if (last_index < 2) throw std::invalid_argument("window must be at least 2");
  const Rational base = 1 / radius;
  std::vector<std::int64_t> e{0, 1, 2};
  e.reserve(static_cast<std::size_t>(last_index) + 1);
  // Latest first instance R^m at index n_m; the m-1 following terms descend.
  std::int64_t run_m = 2;
  std::int64_t run_start = 2;
  std::int64_t running_max = 2;
  for (std::int64_t n = 3; n <= last_index; ++n) {
    const std::int64_t k = n - run_start;
    std::int64_t value = 0;
    if (run_m > 1 && k >= 1 && k <= run_m - 1) {
      value = run_m - k;
    } else {
      value = std::numeric_limits<std::int64_t>::max();
      for (std::int64_t i = 1; i <= n / 2; ++i) value = std::min(value, e[i] + e[n - i]);
    }
    e.push_back(value);
    if (value > running_max) {
      running_max = value;
      run_m = value;
      run_start = n;
    }
  }
  return NormSequence::from_power_form(PowerForm{base, std::move(e)}, Origin::inner_radius,
                                       base);
}

NormSequence scale(const NormSequence& seq, const Rational& factor) {
  if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
  if (factor == 1) return seq;
  NormSequence out = seq;
  Rational power(1);
  for (std::size_t n = 0; n < out.values_.size(); ++n) {
    out.values_[n] = ext_mul(seq.values_[n], ExtNonNeg::exact(power));
    power *= factor;
  }
  out.power_.reset();
  if (seq.power_) {
    if (auto t = exact_log(seq.power_->base, factor)) {
      PowerForm form = *seq.power_;
      for (std::size_t n = 0; n < form.exponents.size(); ++n) {
        form.exponents[n] += *t * static_cast<std::int64_t>(n);
      }
      out.power_ = std::move(form);
    }
  } else if (seq.origin_ == Origin::constant) {
    const bool grows = factor > 1;
    PowerForm form{grows ? factor : Rational(1 / factor), {}};
    for (std::size_t n = 0; n < out.values_.size(); ++n) {
      const auto e = static_cast<std::int64_t>(n);
      form.exponents.push_back(grows ? e : -e);
    }
    out.power_ = std::move(form);
  }
  out.scale_ = seq.scale_ * factor;
  return out;
}

NormSequence truncate(const NormSequence& seq, std::int64_t last_index) {
  if (last_index < 0 || last_index > seq.last_index())
    throw std::invalid_argument("truncation index outside the prefix");
  NormSequence out = seq;
  out.values_.resize(static_cast<std::size_t>(last_index) + 1);
  out.first_zero_ = std::min(seq.first_zero_, out.values_.size());
  if (out.power_ && out.power_->exponents.size() > out.values_.size()) {
    out.power_->exponents.resize(out.values_.size());
  }
  return out;
}

CBound compute_C(const NormSequence& seq, std::int64_t i, std::int64_t window) {
  if (window > seq.last_index() || window < 0)
    throw std::invalid_argument("window exceeds the stored prefix");
  if (i > window || -i > window) throw std::invalid_argument("|i| exceeds the window");
  if (i >= 0) return CBound::certified(seq[static_cast<std::size_t>(i)]);
  if (seq.has_zero() && static_cast<std::int64_t>(seq.first_zero()) <= window) {
    throw ZeroTerm("C_" + std::to_string(i) + " requested on a sequence with a zero term a_" +
                   std::to_string(seq.first_zero()));
  }
  if (is_closed_form(seq)) return CBound::certified(closed_form_C(seq, i));
  return CBound::windowed(windowed_ratio_sup(seq, i, window), Sense::lower);
}

CBound radius_estimate(const NormSequence& seq, std::int64_t k_max) {
  if (k_max < 1 || k_max > seq.last_index())
    throw std::invalid_argument("k_max must lie in [1, N]");
  if (seq.has_zero() && static_cast<std::int64_t>(seq.first_zero()) <= k_max) {
    return CBound::certified(ExtNonNeg::zero());
  }
  if (seq.origin() == Origin::constant) return CBound::certified(ExtNonNeg::exact(seq.scale_factor()));
  std::int64_t best_k = 1;
  if (const auto& pf = seq.power_form()) {
    // compare e_k / k exactly
    for (std::int64_t k = 2; k <= k_max; ++k) {
      if (Rational(pf->exponents[k], k) < Rational(pf->exponents[best_k], best_k)) best_k = k;
    }
    return CBound::windowed(ext_root(seq[best_k], static_cast<std::uint64_t>(best_k)), Sense::upper);
  }
  ExtNonNeg best = ext_root(seq[1], 1);
  for (std::int64_t k = 2; k <= k_max; ++k) {
    best = ext_min(best, ext_root(seq[k], static_cast<std::uint64_t>(k)));
  }
  return CBound::windowed(best, Sense::upper);
}

bool unbounded_trend(const NormSequence& seq) {
  if (seq.has_zero() || is_closed_form(seq)) return false;
  const std::int64_t n = seq.last_index();
  if (n < 8) return false;
  const ExtNonNeg two = ExtNonNeg::exact(2);
  ExtNonNeg previous = windowed_ratio_sup(seq, -1, n / 8);
  for (std::int64_t w : {n / 4, n / 2, n}) {
    ExtNonNeg current = windowed_ratio_sup(seq, -1, w);
    if (compare(current, ext_mul(two, previous)) == std::weak_ordering::less) return false;
    previous = std::move(current);
  }
  return true;
}

Annulus annulus(const NormSequence& seq, std::int64_t k_max) {
  if (k_max < 1 || k_max > seq.last_index())
    throw std::invalid_argument("k_max must lie in [1, N]");
  Annulus out;
  if (seq.has_zero()) {
    // A zero norm of a power makes the element nilpotent: spectrum {0}.
    out.inner = CBound::certified(ExtNonNeg::zero());
    out.outer = CBound::certified(ExtNonNeg::zero());
    out.degenerate = true;
    return out;
  }
  out.outer = radius_estimate(seq, k_max);
  if (is_closed_form(seq)) {
    // inf_k C_{-k}^{1/k} = 1/s (constant) or R/s (inner radius).
    const Rational inf_root = seq.origin() == Origin::constant
                                  ? Rational(1) / seq.scale_factor()
                                  : seq.generator_base() / seq.scale_factor();
    out.inner = CBound::certified(ExtNonNeg::exact(1 / inf_root));
    return out;
  }
  if (unbounded_trend(seq)) {
    out.inner = CBound::windowed(ExtNonNeg::zero(), Sense::estimate);
    out.unbounded_suspected = true;
    return out;
  }
  // max_k (1/C_{-k})^{1/k}
  ExtNonNeg inner = ExtNonNeg::zero();
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const CBound c = compute_C(seq, -k, seq.last_index());
    inner = ext_max(inner, ext_root(ext_div(ExtNonNeg::one(), c.value), static_cast<std::uint64_t>(k)));
  }
  if (compare(inner, out.outer.value, 0.0) == std::weak_ordering::greater) inner = out.outer.value;
  out.inner = CBound::windowed(inner, Sense::estimate);
  return out;
}

ExtNonNeg inverse_norm_lower_bound(const NormSequence& seq) {
  if (seq.has_zero()) throw ZeroTerm("inverse norm bound needs positive terms");
  if (seq.last_index() < 1) return ExtNonNeg::zero();
  return windowed_ratio_sup(seq, -1, seq.last_index());
}

Tristate circle_possible(const NormSequence& seq, std::int64_t k_max) {
  (void)k_max;
  if (seq.has_zero()) return Tristate::no;
  switch (seq.origin()) {
    case Origin::constant:
      return Tristate::yes;
    case Origin::inner_radius:
      // inf C_{-k}^{1/k} = R/s while 1/r = 1/s.
      return seq.generator_base() == 1 ? Tristate::yes : Tristate::no;
    case Origin::unbounded_ratio:
      // C_{-1} is infinite by construction.
      return Tristate::no;
    case Origin::user:
      return Tristate::undetermined;
  }
  return Tristate::undetermined;
}

std::optional<std::vector<ExtNonNeg>> two_sided_C(const NormSequence& seq, std::int64_t w) {
  if (!is_closed_form(seq) || seq.has_zero()) return std::nullopt;
  if (w < 0 || w > seq.last_index()) throw std::invalid_argument("window exceeds the prefix");
  std::vector<ExtNonNeg> out;
  out.reserve(static_cast<std::size_t>(2 * w + 1));
  for (std::int64_t i = -w; i <= w; ++i) {
    out.push_back(i >= 0 ? seq[static_cast<std::size_t>(i)] : closed_form_C(seq, i));
  }
  return out;
}

}  // namespace circspec::sequences
