#pragma once

// One-variable submultiplicative sequence prefixes a_0..a_N.
//
// A valid prefix has a_0 = 1, a_{i+j} <= a_i a_j whenever i + j <= N, and
// zeros only as a suffix. Sequences coming from the two recursive generators
// carry integer exponents over a base R so every scan runs in exact integer
// arithmetic, and they remember their origin so that closed-form C values
// can be reported as certified.

#include "circspec/numerics.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace circspec::sequences {

enum class ViolationKind { not_normalized, not_submultiplicative, zero_not_propagated };

const char* to_string(ViolationKind kind);

/// First failing witness of a validation scan. For not_submultiplicative,
/// (i, j) is the pair with a_{i+j} > a_i a_j; for zero_not_propagated,
/// a_i = 0 while a_j != 0 with i < j.
struct Violation {
  ViolationKind kind;
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(Violation v)
      : std::runtime_error(v.message), violation_(std::move(v)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Raised when a ratio a_{n+i}/a_n is requested on a sequence with zeros.
class ZeroTerm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unvalidated input. When `base` is set, `exponents` describes the terms
/// (nullopt = zero term) and `values` is derived from it.
struct RawSequence {
  std::vector<ExtNonNeg> values;
  std::optional<Rational> base;
  std::vector<std::optional<std::int64_t>> exponents;

  static RawSequence from_values(std::vector<ExtNonNeg> values);
  static RawSequence from_exponents(Rational base,
                                    std::vector<std::optional<std::int64_t>> exponents);
};

/// a_n = base^{exponents[n]} for n < exponents.size(); later terms are zero.
struct PowerForm {
  Rational base;
  std::vector<std::int64_t> exponents;
};

enum class Origin { user, constant, unbounded_ratio, inner_radius };

class NormSequence {
 public:
  /// Number of stored terms, N + 1.
  std::size_t size() const { return values_.size(); }
  /// Index of the last term, N.
  std::int64_t last_index() const { return static_cast<std::int64_t>(values_.size()) - 1; }
  const ExtNonNeg& operator[](std::size_t n) const { return values_[n]; }
  const std::vector<ExtNonNeg>& values() const { return values_; }
  const std::optional<PowerForm>& power_form() const { return power_; }

  /// Index of the first zero term, or size() when all terms are positive.
  std::size_t first_zero() const { return first_zero_; }
  bool has_zero() const { return first_zero_ < values_.size(); }

  Origin origin() const { return origin_; }
  /// Generator base R (1 for constant and user sequences).
  const Rational& generator_base() const { return generator_base_; }
  /// Accumulated factor s from scale(); the sequence is s^n times its origin.
  const Rational& scale_factor() const { return scale_; }

 private:
  friend NormSequence validate(const RawSequence& raw);
  friend NormSequence gen_unbounded_ratio(const Rational& base, std::int64_t last_index);
  friend NormSequence gen_inner_radius(const Rational& radius, std::int64_t last_index);
  friend NormSequence constant_sequence(std::int64_t last_index);
  friend NormSequence scale(const NormSequence& seq, const Rational& factor);
  friend NormSequence truncate(const NormSequence& seq, std::int64_t last_index);

  static NormSequence from_power_form(PowerForm form, Origin origin, Rational generator_base);

  std::vector<ExtNonNeg> values_;
  std::optional<PowerForm> power_;
  std::size_t first_zero_ = 0;
  Origin origin_ = Origin::user;
  Rational generator_base_{1};
  Rational scale_{1};
};

/// First violation in scan order: normalization, zero propagation, then
/// pairs (i, j), i <= j, ordered by i + j and then by i.
std::optional<Violation> find_violation(const RawSequence& raw,
                                        double tol = kDefaultTolerance);

/// Throws ValidationError with the first violation.
NormSequence validate(const RawSequence& raw);

/// a_0 = 1, a_1 = R, a_2 = R^2, then a_n = min_{i+j=n} a_i a_j while the
/// previous term is not a new maximum and a_n = R right after a new maximum.
/// Unbounded, with a_n^{1/n} -> 1 and sup a_{n-1}/a_n = infinity.
NormSequence gen_unbounded_ratio(const Rational& base, std::int64_t last_index);

/// For r = 1 the constant sequence. For r < 1 with R = 1/r: a_0..a_2 =
/// 1, R, R^2; when R^m first appears at index n_m the next m-1 terms are
/// R^{m-1}, ..., R, otherwise a_n = min_{i+j=n} a_i a_j. Has C_{-k} = R^k.
NormSequence gen_inner_radius(const Rational& radius, std::int64_t last_index);

NormSequence constant_sequence(std::int64_t last_index);

/// (R^n a_n); closed forms and exponent form are carried along when possible.
NormSequence scale(const NormSequence& seq, const Rational& factor);

/// Prefix a_0..a_{last_index}.
NormSequence truncate(const NormSequence& seq, std::int64_t last_index);

/// C_i = sup_{n >= max(0,-i), n <= window} a_{n+i}/a_n.
/// i >= 0 gives a_i (certified). Negative i gives the windowed supremum
/// (a lower bound) unless the sequence has a closed form.
/// Throws ZeroTerm for negative i when a zero lies in the window.
CBound compute_C(const NormSequence& seq, std::int64_t i, std::int64_t window);

struct Annulus {
  CBound inner;
  CBound outer;
  /// The spectrum is forced to be {0}.
  bool degenerate = false;
  /// Windowed C_{-1} kept at least doubling over the last three window
  /// doublings; inner radius reported as 0.
  bool unbounded_suspected = false;
};

/// Smallest centered annulus compatible with the prefix, from C_k, C_{-k}
/// for 1 <= k <= k_max.
Annulus annulus(const NormSequence& seq, std::int64_t k_max);

/// Trend heuristic for C_{-1} = infinity on windows N/8, N/4, N/2, N.
bool unbounded_trend(const NormSequence& seq);

/// max_{1<=n<=N} a_{n-1}/a_n: any invertible realization has ||x^{-1}|| at
/// least this large.
ExtNonNeg inverse_norm_lower_bound(const NormSequence& seq);

enum class Tristate { yes, no, undetermined };

const char* to_string(Tristate t);

/// Whether some realization can have spectrum equal to the circle of radius
/// lim a_n^{1/n}. Decided only from closed forms.
Tristate circle_possible(const NormSequence& seq, std::int64_t k_max);

/// Windowed spectral-radius estimate min_{1<=k<=k_max} a_k^{1/k}.
CBound radius_estimate(const NormSequence& seq, std::int64_t k_max);

/// (C_i) for -w <= i <= w from closed forms; nullopt unless every C_{-k}
/// is certified. Index i is stored at position i + w.
std::optional<std::vector<ExtNonNeg>> two_sided_C(const NormSequence& seq, std::int64_t w);

}  // namespace circspec::sequences
