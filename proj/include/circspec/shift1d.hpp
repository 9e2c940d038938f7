#pragma once

// Weighted shifts realizing one-variable norm sequences.
//
// A forward shift acts by T e_n = w_n e_{n+1} with w_n = p_{n+1}/p_n for a
// positive "potential" p (the norm sequence itself, or a two-sided C
// collection), and w_n = 0 once p vanishes. Operators are kept as weight
// maps over a finite index window; nothing is materialized as a matrix.

#include "circspec/numerics.hpp"
#include "circspec/sequences.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace circspec::shift1d {

enum class Mode { unilateral, bilateral };
enum class Direction { forward, backward };

class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ZeroWeight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WeightedShift {
 public:
  Mode mode() const { return mode_; }
  Direction direction() const { return direction_; }
  /// Basis vectors e_n exist for first_index() <= n <= last_index().
  std::int64_t first_index() const { return first_; }
  std::int64_t last_index() const { return first_ + static_cast<std::int64_t>(potential_.size()) - 1; }
  /// Number of weights in the window.
  std::int64_t weight_count() const { return last_index() - first_; }

  /// Weight attached to e_n: the coefficient of T e_n.
  ExtNonNeg weight(std::int64_t n) const;

  /// T e_n as (target index, coefficient). Throws std::out_of_range when
  /// the image leaves the window.
  std::pair<std::int64_t, ExtNonNeg> apply(std::int64_t n) const;

  const std::vector<ExtNonNeg>& potential() const { return potential_; }

 private:
  friend WeightedShift build_unilateral(const sequences::NormSequence& seq);
  friend WeightedShift build_bilateral(const std::vector<ExtNonNeg>& data, std::int64_t first);
  friend WeightedShift inverse_weights(const WeightedShift& shift);
  friend ExtNonNeg power_norm(const WeightedShift& shift, std::int64_t k);

  const ExtNonNeg& p(std::int64_t n) const { return potential_[static_cast<std::size_t>(n - first_)]; }

  Mode mode_ = Mode::unilateral;
  Direction direction_ = Direction::forward;
  std::int64_t first_ = 0;
  std::vector<ExtNonNeg> potential_;
  // Integer exponents of the potential over `base_` when available.
  std::optional<Rational> base_;
  std::vector<std::int64_t> exponents_;
};

/// Unilateral realization: T e_n = (a_{n+1}/a_n) e_{n+1} on l^2(N), 0 when a_n = 0.
WeightedShift build_unilateral(const sequences::NormSequence& seq);

/// Bilateral forward shift with weights data_{n+1}/data_n, where data[t]
/// is the value at index first + t and index 0 must carry value 1.
/// Throws ZeroWeight on a nonpositive entry.
WeightedShift build_bilateral(const std::vector<ExtNonNeg>& data, std::int64_t first);

/// Backward shift T^{-1} e_n = (p_{n-1}/p_n) e_{n-1}. Unilateral shifts are
/// not invertible: throws ModeError.
WeightedShift inverse_weights(const WeightedShift& shift);

/// ||T^k|| over the window: the largest product of k consecutive weights
/// whose basis vectors stay inside the window. A lower bound of the
/// untruncated norm when the data continue past the window.
ExtNonNeg power_norm(const WeightedShift& shift, std::int64_t k);

/// min_{1<=k<=k_max} ||T^k||^{1/k}; requires k_max <= weight_count()/2.
CBound numeric_spectral_radius(const WeightedShift& shift, std::int64_t k_max);

}  // namespace circspec::shift1d
