#include "circspec/shift1d.hpp"

#include <string>

namespace circspec::shift1d {

ExtNonNeg WeightedShift::weight(std::int64_t n) const {
  if (direction_ == Direction::forward) {
    if (n < first_ || n >= last_index()) throw std::out_of_range("no weight at index " + std::to_string(n));
    if (p(n).is_zero()) return ExtNonNeg::zero();
    return ext_div(p(n + 1), p(n));
  }
  if (n <= first_ || n > last_index()) throw std::out_of_range("no weight at index " + std::to_string(n));
  return ext_div(p(n - 1), p(n));
}

std::pair<std::int64_t, ExtNonNeg> WeightedShift::apply(std::int64_t n) const {
  const std::int64_t target = direction_ == Direction::forward ? n + 1 : n - 1;
  return {target, weight(n)};
}

WeightedShift build_unilateral(const sequences::NormSequence& seq) {
  WeightedShift shift;
  shift.mode_ = Mode::unilateral;
  shift.first_ = 0;
  shift.potential_ = seq.values();
  if (const auto& pf = seq.power_form(); pf && !seq.has_zero()) {
    shift.base_ = pf->base;
    shift.exponents_ = pf->exponents;
  }
  return shift;
}

WeightedShift build_bilateral(const std::vector<ExtNonNeg>& data, std::int64_t first) {
  if (first > 0 || first + static_cast<std::int64_t>(data.size()) <= 0)
    throw std::invalid_argument("bilateral data must cover index 0");
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (data[t].is_zero() || data[t].is_infinite()) {
      throw ZeroWeight("bilateral data at index " + std::to_string(first + static_cast<std::int64_t>(t)) +
                       " is " + data[t].to_string());
    }
  }
  WeightedShift shift;
  shift.mode_ = Mode::bilateral;
  shift.first_ = first;
  shift.potential_ = data;
  return shift;
}

WeightedShift inverse_weights(const WeightedShift& shift) {
  if (shift.mode_ != Mode::bilateral)
    throw ModeError("a unilateral weighted shift is not invertible");
  WeightedShift inverse = shift;
  inverse.direction_ = shift.direction_ == Direction::forward ? Direction::backward : Direction::forward;
  return inverse;
}

ExtNonNeg power_norm(const WeightedShift& shift, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("negative power");
  if (k == 0) return ExtNonNeg::one();
  if (k > shift.weight_count()) throw std::invalid_argument("power exceeds the window");
  // The k-fold product telescopes to p_{target}/p_{source}; once the
  // potential vanishes the forward product is zero.
  const bool forward = shift.direction_ == Direction::forward;
  const std::int64_t lo = shift.first_;
  const std::int64_t hi = shift.last_index() - k;
  if (!shift.exponents_.empty()) {
    std::int64_t best = INT64_MIN;
    for (std::int64_t n = lo; n <= hi; ++n) {
      const auto a = shift.exponents_[static_cast<std::size_t>(n - lo)];
      const auto b = shift.exponents_[static_cast<std::size_t>(n + k - lo)];
      best = std::max(best, forward ? b - a : a - b);
    }
    return ExtNonNeg::exact(rational_pow(*shift.base_, best));
  }
  ExtNonNeg best = ExtNonNeg::zero();
  for (std::int64_t n = lo; n <= hi; ++n) {
    const ExtNonNeg& source = shift.p(forward ? n : n + k);
    const ExtNonNeg& target = shift.p(forward ? n + k : n);
    if (source.is_zero()) continue;
    best = ext_max(best, ext_div(target, source));
  }
  return best;
}

CBound numeric_spectral_radius(const WeightedShift& shift, std::int64_t k_max) {
  if (k_max < 1 || 2 * k_max > shift.weight_count())
    throw std::invalid_argument("k_max must lie in [1, window/2]");
  ExtNonNeg best = ExtNonNeg::infinity();
  for (std::int64_t k = 1; k <= k_max; ++k) {
    best = ext_min(best, ext_root(power_norm(shift, k), static_cast<std::uint64_t>(k)));
  }
  return CBound::windowed(best, Sense::estimate);
}

}  // namespace circspec::shift1d
