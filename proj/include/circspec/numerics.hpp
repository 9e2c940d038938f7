#pragma once

// Extended nonnegative scalars and exact base-power values.
//
// ExtNonNeg is the codomain of every norm bound in the library: a finite
// value that is either an exact rational or a 64-bit float, or +infinity.
// Exact values stay exact under multiplication and division; mixing with a
// float demotes the result to a float. Comparisons involving floats use a
// relative tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace circspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kDefaultTolerance = 1e-9;

/// Raised for ill-posed combinations such as 0 * infinity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ExtNonNeg {
 public:
  ExtNonNeg() = default;  // exact zero

  static ExtNonNeg exact(Rational value);
  static ExtNonNeg exact(std::int64_t value) { return exact(Rational(value)); }
  static ExtNonNeg approx(double value);
  static ExtNonNeg infinity();
  static ExtNonNeg zero() { return {}; }
  static ExtNonNeg one() { return exact(Rational(1)); }

  bool is_infinite() const { return kind_ == Kind::infinite; }
  bool is_finite() const { return kind_ != Kind::infinite; }
  /// Finite and exact.
  bool is_exact() const { return kind_ == Kind::exact; }
  bool is_approx() const { return kind_ == Kind::approx; }
  bool is_zero() const;
  bool is_integer() const;

  /// Exact rational value; throws std::logic_error unless is_exact().
  const Rational& rational() const;
  /// +inf for Infinite.
  double to_double() const;
  /// Natural log; -inf for zero, +inf for Infinite.
  double log() const;

  /// "inf", "p/q", "n", or a round-trippable decimal for floats.
  std::string to_string() const;

  /// Structural equality: same kind and identical value.
  friend bool operator==(const ExtNonNeg& a, const ExtNonNeg& b);

 private:
  enum class Kind : std::uint8_t { exact, approx, infinite };
  Kind kind_ = Kind::exact;
  Rational exact_{0};
  double approx_ = 0.0;
};

/// Product with infinity absorption. 0 * inf raises DomainError.
ExtNonNeg ext_mul(const ExtNonNeg& x, const ExtNonNeg& y);

/// Quotient x / y. c/0 = inf for c > 0, c/inf = 0 for finite c.
/// 0/0 and inf/inf raise DomainError.
ExtNonNeg ext_div(const ExtNonNeg& x, const ExtNonNeg& y);

/// x^k for k >= 0, exact when x is exact.
ExtNonNeg ext_pow(const ExtNonNeg& x, std::uint64_t k);

/// k-th root, k >= 1. Exact when x is an exact rational whose numerator
/// and denominator are perfect k-th powers; otherwise a float.
ExtNonNeg ext_root(const ExtNonNeg& x, std::uint64_t k);

/// Three-way comparison. Exact-vs-exact and anything-vs-infinity compare
/// exactly; any float operand is compared with relative tolerance `tol`
/// (values within tolerance are equivalent).
std::weak_ordering compare(const ExtNonNeg& x, const ExtNonNeg& y,
                           double tol = kDefaultTolerance);

inline bool leq(const ExtNonNeg& x, const ExtNonNeg& y,
                double tol = kDefaultTolerance) {
  return compare(x, y, tol) != std::weak_ordering::greater;
}

ExtNonNeg ext_max(const ExtNonNeg& x, const ExtNonNeg& y);
ExtNonNeg ext_min(const ExtNonNeg& x, const ExtNonNeg& y);

/// Parses "inf", "p/q", integers and decimal strings ("0.25") exactly.
ExtNonNeg parse_ext(const std::string& text);

/// Integer k-th root if `value` is a perfect k-th power.
std::optional<BigInt> exact_iroot(const BigInt& value, std::uint64_t k);

/// Exact rational parse of "p/q", "n" or a plain decimal "1.25".
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& q);

/// R^e for an exact base; e may be negative.
Rational rational_pow(const Rational& base, std::int64_t exponent);

/// base^exponent with arbitrary-precision exponent, or the distinguished zero.
class BasePower {
 public:
  BasePower(Rational base, BigInt exponent);
  static BasePower zero(Rational base);

  const Rational& base() const { return base_; }
  const BigInt& exponent() const { return exponent_; }
  bool is_zero() const { return zero_; }

  /// Same-base product; zero absorbs. Throws std::invalid_argument on
  /// mismatched bases.
  friend BasePower operator*(const BasePower& a, const BasePower& b);
  friend std::strong_ordering operator<=>(const BasePower& a,
                                          const BasePower& b);
  friend bool operator==(const BasePower& a, const BasePower& b);

  /// Exact value as ExtNonNeg (exponent must fit in int64).
  ExtNonNeg value() const;
  double to_double() const;
  /// Exact root when the exponent is divisible by k.
  std::optional<BasePower> root(std::uint64_t k) const;

  /// Recovers the exponent from a float value; nullopt if `value` is not
  /// within tolerance of an integer power of `base`.
  static std::optional<BasePower> from_double(const Rational& base,
                                              double value,
                                              double tol = kDefaultTolerance);

 private:
  Rational base_;
  BigInt exponent_;
  bool zero_ = false;
};

}  // namespace circspec

namespace circspec {

/// How a reported bound relates to the true (infinite-index) quantity.
enum class Sense : std::uint8_t {
  exact,     ///< proven equal
  lower,     ///< true value >= reported (windowed supremum)
  upper,     ///< true value <= reported (windowed infimum)
  estimate,  ///< no certified direction
};

/// A bound on a C-type quantity together with its provenance.
struct CBound {
  ExtNonNeg value;
  bool exact = false;
  Sense sense = Sense::estimate;
  /// The admissible index set was empty inside the scanned window.
  bool empty_in_window = false;

  static CBound certified(ExtNonNeg v) { return {std::move(v), true, Sense::exact, false}; }
  static CBound windowed(ExtNonNeg v, Sense s) { return {std::move(v), false, s, false}; }
};

/// "=", ">=", "<=" or "~" for use in human-readable output.
const char* qualifier(Sense sense);

}  // namespace circspec
