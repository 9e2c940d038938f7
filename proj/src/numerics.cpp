#include "circspec/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace circspec {

namespace {

double rational_to_double(const Rational& q) { return q.convert_to<double>(); }

bool within_tolerance(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

ExtNonNeg ExtNonNeg::exact(Rational value) {
  if (value < 0) throw DomainError("negative value " + rational_to_string(value));
  ExtNonNeg out;
  out.kind_ = Kind::exact;
  out.exact_ = std::move(value);
  return out;
}

ExtNonNeg ExtNonNeg::approx(double value) {
  if (std::isnan(value)) throw DomainError("NaN is not an extended nonnegative value");
  if (value < 0) throw DomainError("negative value " + std::to_string(value));
  if (std::isinf(value)) return infinity();
  ExtNonNeg out;
  out.kind_ = Kind::approx;
  out.approx_ = value;
  return out;
}

ExtNonNeg ExtNonNeg::infinity() {
  ExtNonNeg out;
  out.kind_ = Kind::infinite;
  return out;
}

bool ExtNonNeg::is_zero() const {
  switch (kind_) {
    case Kind::exact: return exact_ == 0;
    case Kind::approx: return approx_ == 0.0;
    case Kind::infinite: return false;
  }
  return false;
}

bool ExtNonNeg::is_integer() const {
  return kind_ == Kind::exact && denominator(exact_) == 1;
}

const Rational& ExtNonNeg::rational() const {
  if (kind_ != Kind::exact) throw std::logic_error("value is not exact: " + to_string());
  return exact_;
}

double ExtNonNeg::to_double() const {
  switch (kind_) {
    case Kind::exact: return rational_to_double(exact_);
    case Kind::approx: return approx_;
    case Kind::infinite: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double ExtNonNeg::log() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  if (kind_ == Kind::approx) return std::log(approx_);
  // Split numerator and denominator so huge exact values do not overflow.
  const auto log_int = [](const BigInt& v) {
    const auto bits = boost::multiprecision::msb(v);
    if (bits < 1000) return std::log(v.convert_to<double>());
    const auto shift = bits - 60;
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) +
           static_cast<double>(shift) * std::log(2.0);
  };
  return log_int(numerator(exact_)) - log_int(denominator(exact_));
}

std::string ExtNonNeg::to_string() const {
  switch (kind_) {
    case Kind::exact: return rational_to_string(exact_);
    case Kind::infinite: return "inf";
    case Kind::approx: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, approx_);
      return std::string(buf, res.ptr);
    }
  }
  return {};
}

bool operator==(const ExtNonNeg& a, const ExtNonNeg& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case ExtNonNeg::Kind::exact: return a.exact_ == b.exact_;
    case ExtNonNeg::Kind::approx: return a.approx_ == b.approx_;
    case ExtNonNeg::Kind::infinite: return true;
  }
  return false;
}

ExtNonNeg ext_mul(const ExtNonNeg& x, const ExtNonNeg& y) {
  if (x.is_infinite() || y.is_infinite()) {
    if (x.is_zero() || y.is_zero()) throw DomainError("0 * infinity is undefined");
    return ExtNonNeg::infinity();
  }
  if (x.is_exact() && y.is_exact()) return ExtNonNeg::exact(x.rational() * y.rational());
  return ExtNonNeg::approx(x.to_double() * y.to_double());
}

ExtNonNeg ext_div(const ExtNonNeg& x, const ExtNonNeg& y) {
  if (y.is_infinite()) {
    if (x.is_infinite()) throw DomainError("infinity / infinity is undefined");
    return ExtNonNeg::zero();
  }
  if (y.is_zero()) {
    if (x.is_zero()) throw DomainError("0 / 0 is undefined");
    return ExtNonNeg::infinity();
  }
  if (x.is_infinite()) return ExtNonNeg::infinity();
  if (x.is_exact() && y.is_exact()) return ExtNonNeg::exact(x.rational() / y.rational());
  return ExtNonNeg::approx(x.to_double() / y.to_double());
}

ExtNonNeg ext_pow(const ExtNonNeg& x, std::uint64_t k) {
  if (k == 0) return ExtNonNeg::one();
  if (x.is_infinite()) return x;
  if (x.is_exact()) {
    Rational result(1);
    Rational base = x.rational();
    for (auto e = k; e > 0; e >>= 1) {
      if (e & 1U) result *= base;
      if (e > 1) base *= base;
    }
    return ExtNonNeg::exact(std::move(result));
  }
  return ExtNonNeg::approx(std::pow(x.to_double(), static_cast<double>(k)));
}

std::optional<BigInt> exact_iroot(const BigInt& value, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("root index must be positive");
  if (value < 0) return std::nullopt;
  if (value < 2 || k == 1) return value;
  const auto bits = boost::multiprecision::msb(value) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, static_cast<unsigned>(k)) <= value) lo = mid;
    else hi = mid - 1;
  }
  if (boost::multiprecision::pow(lo, static_cast<unsigned>(k)) == value) return lo;
  return std::nullopt;
}

ExtNonNeg ext_root(const ExtNonNeg& x, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("root index must be positive");
  if (k == 1 || x.is_infinite()) return x;
  if (x.is_exact()) {
    if (auto num = exact_iroot(numerator(x.rational()), k)) {
      if (auto den = exact_iroot(denominator(x.rational()), k)) {
        return ExtNonNeg::exact(Rational(*num, *den));
      }
    }
    if (x.is_zero()) return x;
    return ExtNonNeg::approx(std::exp(x.log() / static_cast<double>(k)));
  }
  return ExtNonNeg::approx(std::pow(x.to_double(), 1.0 / static_cast<double>(k)));
}

std::weak_ordering compare(const ExtNonNeg& x, const ExtNonNeg& y, double tol) {
  if (x.is_infinite() || y.is_infinite()) {
    if (x.is_infinite() && y.is_infinite()) return std::weak_ordering::equivalent;
    return x.is_infinite() ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  if (x.is_exact() && y.is_exact()) {
    if (x.rational() < y.rational()) return std::weak_ordering::less;
    if (x.rational() > y.rational()) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
  const double a = x.to_double();
  const double b = y.to_double();
  if (within_tolerance(a, b, tol)) return std::weak_ordering::equivalent;
  return a < b ? std::weak_ordering::less : std::weak_ordering::greater;
}

ExtNonNeg ext_max(const ExtNonNeg& x, const ExtNonNeg& y) {
  return compare(x, y, 0.0) == std::weak_ordering::less ? y : x;
}

ExtNonNeg ext_min(const ExtNonNeg& x, const ExtNonNeg& y) {
  return compare(x, y, 0.0) == std::weak_ordering::greater ? y : x;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return num / den;
  }
  // Decimal with optional fraction and exponent, read exactly.
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  std::int64_t scale = 0;
  bool seen_digit = false;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    digits += text[pos];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    for (++pos; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      digits += text[pos];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a number: '" + text + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::int64_t exp = 0;
    auto res = std::from_chars(text.data() + pos + (text[pos] == '+' ? 1 : 0),
                               text.data() + text.size(), exp);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw std::invalid_argument("bad exponent in '" + text + "'");
    scale += exp;
    pos = text.size();
  }
  if (pos != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  // cpp_int reads a leading 0 as an octal prefix.
  const auto nonzero = digits.find_first_not_of('0');
  Rational value{nonzero == std::string::npos ? BigInt(0) : BigInt(digits.substr(nonzero))};
  value *= rational_pow(Rational(10), scale);
  return negative ? Rational(-value) : value;
}

ExtNonNeg parse_ext(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Infinity") return ExtNonNeg::infinity();
  return ExtNonNeg::exact(parse_rational(text));
}

std::string rational_to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational rational_pow(const Rational& base, std::int64_t exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    return 1 / rational_pow(base, -exponent);
  }
  Rational result(1);
  Rational b = base;
  for (auto e = static_cast<std::uint64_t>(exponent); e > 0; e >>= 1) {
    if (e & 1U) result *= b;
    if (e > 1) b *= b;
  }
  return result;
}

// ---------------------------------------------------------------------------

BasePower::BasePower(Rational base, BigInt exponent)
    : base_(std::move(base)), exponent_(std::move(exponent)) {
  if (base_ <= 1) throw std::invalid_argument("BasePower base must exceed 1");
}

BasePower BasePower::zero(Rational base) {
  BasePower out(std::move(base), 0);
  out.zero_ = true;
  return out;
}

BasePower operator*(const BasePower& a, const BasePower& b) {
  if (a.base_ != b.base_) throw std::invalid_argument("BasePower bases differ");
  if (a.zero_ || b.zero_) return BasePower::zero(a.base_);
  return BasePower(a.base_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const BasePower& a, const BasePower& b) {
  if (a.base_ != b.base_) throw std::invalid_argument("BasePower bases differ");
  if (a.zero_ || b.zero_) {
    if (a.zero_ && b.zero_) return std::strong_ordering::equal;
    return a.zero_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.exponent_ < b.exponent_) return std::strong_ordering::less;
  if (a.exponent_ > b.exponent_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const BasePower& a, const BasePower& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

ExtNonNeg BasePower::value() const {
  if (zero_) return ExtNonNeg::zero();
  if (exponent_ > std::numeric_limits<std::int64_t>::max() ||
      exponent_ < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("exponent too large for an exact value");
  return ExtNonNeg::exact(rational_pow(base_, exponent_.convert_to<std::int64_t>()));
}

double BasePower::to_double() const {
  if (zero_) return 0.0;
  return std::exp(exponent_.convert_to<double>() * std::log(base_.convert_to<double>()));
}

std::optional<BasePower> BasePower::root(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("root index must be positive");
  if (zero_) return *this;
  if (exponent_ % k != 0) return std::nullopt;
  return BasePower(base_, exponent_ / k);
}

std::optional<BasePower> BasePower::from_double(const Rational& base, double value,
                                                double tol) {
  if (value == 0.0) return zero(base);
  if (!(value > 0.0) || std::isinf(value)) return std::nullopt;
  const double e = std::log(value) / std::log(base.convert_to<double>());
  const double rounded = std::round(e);
  if (std::fabs(e - rounded) > tol * std::max(1.0, std::fabs(e))) return std::nullopt;
  return BasePower(base, BigInt(static_cast<std::int64_t>(rounded)));
}

}  // namespace circspec

namespace circspec {

const char* qualifier(Sense sense) {
  switch (sense) {
    case Sense::exact: return "=";
    case Sense::lower: return ">=";
    case Sense::upper: return "<=";
    case Sense::estimate: return "~";
  }
  return "~";
}

}  // namespace circspec
