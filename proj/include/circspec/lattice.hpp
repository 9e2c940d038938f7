#pragma once

// Multi-index norm data: fields indexed by Z^n, their ratio suprema C_i,
// and the index sets S and M.
//
// A field is stored as a dense table over the box prod_k [-r_k, r_k].
// With a clamping tail the value at any index is the table value at the
// coordinatewise clamp of that index, so a finite table describes the whole
// lattice and suprema over infinite index sets reduce to finite scans.
// With a truncated tail only the table itself is known and every supremum
// is a windowed lower bound.

#include "circspec/numerics.hpp"
#include "circspec/sequences.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace circspec::lattice {

using MultiIndex = std::vector<std::int64_t>;

MultiIndex zero_index(std::size_t n);
/// sign * e_k (axes are 0-based).
MultiIndex unit(std::size_t n, std::size_t k, std::int64_t sign = 1);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator*(std::int64_t c, const MultiIndex& a);
std::int64_t sign_of(std::int64_t x);
std::int64_t l1_norm(const MultiIndex& i);
bool is_zero(const MultiIndex& i);
bool is_nonnegative(const MultiIndex& i);
/// Order by l1 norm, then lexicographically.
bool graded_less(const MultiIndex& a, const MultiIndex& b);
/// "(2,-1)"
std::string to_string(const MultiIndex& i);

/// Subset of the axes {0, ..., n-1}.
using AxisSet = std::vector<bool>;
std::string axes_to_string(const AxisSet& s);

/// Index set {i in Z^n : i_k >= 0 for every restricted axis k}.
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<bool> restricted) : restricted_(std::move(restricted)) {}
  /// The nonnegative cone.
  static Domain nonnegative(std::size_t n) { return Domain(std::vector<bool>(n, true)); }
  static Domain full(std::size_t n) { return Domain(std::vector<bool>(n, false)); }
  /// Indices nonnegative off the invertible axes s.
  static Domain with_free_axes(const AxisSet& s);

  std::size_t dim() const { return restricted_.size(); }
  bool restricted(std::size_t k) const { return restricted_[k]; }
  bool contains(const MultiIndex& i) const;
  /// True when every index of *this lies in other.
  bool subset_of(const Domain& other) const;
  const std::vector<bool>& mask() const { return restricted_; }
  bool operator==(const Domain&) const = default;

 private:
  std::vector<bool> restricted_;
};

enum class Tail { clamp, truncated };

/// Exponent sentinels of the power fast path.
inline constexpr std::int64_t kZeroExponent = INT64_MIN;
inline constexpr std::int64_t kInfiniteExponent = INT64_MAX;

class Field {
 public:
  Field() = default;
  /// `table` lists the values over prod_k [-radii_k, radii_k] with axis 0
  /// varying slowest. Entries outside the domain are ignored.
  Field(Domain domain, std::vector<std::int64_t> radii, Tail tail, std::vector<ExtNonNeg> table,
        std::vector<char> empty = {});

  std::size_t dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  const std::vector<std::int64_t>& radii() const { return radii_; }
  Tail tail() const { return tail_; }
  bool exact() const { return tail_ == Tail::clamp; }

  /// In the domain and, for a truncated tail, inside the table.
  bool covers(const MultiIndex& i) const;
  ExtNonNeg at(const MultiIndex& i) const;
  /// The defining supremum had no admissible index (value is infinite).
  bool empty_at(const MultiIndex& i) const;

  /// Power fast path: every value in the domain is zero, infinite or an
  /// integer power of base().
  const std::optional<Rational>& base() const { return base_; }
  std::int64_t exponent_at(const MultiIndex& i) const;

  std::size_t table_size() const { return table_.size(); }
  /// Table position of (the clamp of) i.
  std::size_t offset(const MultiIndex& i) const;
  MultiIndex index_at(std::size_t offset) const;
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  const std::vector<ExtNonNeg>& table() const { return table_; }
  const std::vector<std::int64_t>& exponents() const { return exponents_; }
  const std::vector<char>& empty_flags() const { return empty_; }
  /// Natural logs of the table values, used to skip exact comparisons.
  const std::vector<double>& logs() const { return logs_; }

  /// Indices of domain ∩ [-rho, rho]^n (∩ the table for truncated tails)
  /// in graded order.
  std::vector<MultiIndex> indices_in_box(std::int64_t rho) const;

 private:
  void detect_power_form();

  Domain domain_;
  std::vector<std::int64_t> radii_;
  std::vector<std::size_t> strides_;
  Tail tail_ = Tail::clamp;
  std::vector<ExtNonNeg> table_;
  std::vector<char> empty_;
  std::optional<Rational> base_;
  std::vector<std::int64_t> exponents_;
  std::vector<double> logs_;
};

/// Result of one ratio supremum.
struct RatioSup {
  ExtNonNeg value;
  bool empty = false;
};

/// sup f_{m+i}/f_m over m with m, m+i in `over` and f_m, f_{m+i} not both
/// zero; infinite when no m qualifies. `over` must lie in f's domain.
/// Truncated fields only use m, m+i with |coordinates| <= window.
RatioSup ratio_sup_at(const Field& f, const Domain& over, const MultiIndex& i,
                      std::optional<std::int64_t> window = std::nullopt);

/// The same supremum for every index of `out`. For clamping fields the
/// result is again a clamping field (exact); otherwise it is computed on
/// the input table and marked truncated.
Field ratio_sup(const Field& f, const Domain& over, const Domain& out,
                std::optional<std::int64_t> window = std::nullopt);

/// Smallest radii describing the same clamping field.
Field compress(const Field& f);

/// Copy of f with values outside `out` dropped (out must lie in f's domain).
Field restrict_to(const Field& f, const Domain& out);

// ---------------------------------------------------------------------------
// Norm fields

enum class TailKind { constant, clamp, truncated };

struct RawField {
  std::size_t n = 0;
  std::int64_t box = 0;
  ExtNonNeg default_value = ExtNonNeg::one();
  std::vector<std::pair<MultiIndex, ExtNonNeg>> entries;
  TailKind tail = TailKind::constant;
  std::optional<AxisSet> declared_S;
};

using sequences::ViolationKind;

struct Violation {
  ViolationKind kind;
  MultiIndex i;
  MultiIndex j;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(Violation v) : std::runtime_error(v.message), violation_(std::move(v)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

struct NormField {
  Field values;
  std::int64_t box = 0;
  std::optional<AxisSet> declared_S;
  /// Pairs were sampled rather than scanned exhaustively.
  bool sampled = false;

  std::size_t dim() const { return values.dim(); }
};

struct ScanOptions {
  double tol = kDefaultTolerance;
  /// Above this many pairs the scan samples `samples` random pairs.
  std::uint64_t max_pairs = 1u << 22;
  std::uint64_t samples = 1u << 21;
  std::uint64_t seed = 0x5eed;
};

/// Table over S0 described by the raw entries.
Field materialize(const RawField& raw);

/// Normalization, zero propagation and submultiplicativity on f's domain.
/// Clamping fields are checked on the whole lattice; truncated fields on
/// their table. The reported pair minimizes (i+j, j) in graded order.
std::optional<Violation> find_violation(const Field& f, const ScanOptions& opts = {},
                                        bool* sampled = nullptr);

NormField validate_field(const RawField& raw, const ScanOptions& opts = {});

/// The prefix a_0..a_N as a one-dimensional truncated field.
NormField from_sequence(const sequences::NormSequence& seq);

/// {m in S0 ∩ box : m+i in S0 ∩ box, a_m and a_{m+i} not both 0}.
std::vector<MultiIndex> compute_A(const NormField& field, const MultiIndex& i);

/// C_i = sup over A_i of a_{m+i}/a_m (over the whole cone for clamping
/// fields, certified; windowed lower bound otherwise).
CBound compute_C_multi(const NormField& field, const MultiIndex& i,
                       std::optional<std::int64_t> window = std::nullopt);

struct SInference {
  AxisSet S;
  bool declared = false;
  /// Decided from exact C values.
  bool exact = false;
};

/// S = {k : C_{-e_k} finite}. A declared S is passed through. For truncated
/// fields k is included when the windowed C_{-e_k} is finite and unchanged
/// between the half and full window.
SInference infer_S(const NormField& field);

struct CField {
  Field values;  // over Z^n
  SInference s;
  std::int64_t box = 0;

  Domain M() const { return Domain::with_free_axes(s.S); }
  CBound at(const MultiIndex& i) const;
  /// M ∩ [-box, box]^n in graded order.
  std::vector<MultiIndex> indices() const;
};

CField compute_C_field(const NormField& field);

/// Whether m+i or m+j lies in S0 for every m in [0, window]^n with m+i+j in
/// S0.
bool check_pair_condition(const MultiIndex& i, const MultiIndex& j, std::int64_t window);

/// C_m * prod_k C_{sign(i_k) e_k}^{|i_k|}.
ExtNonNeg corollary_bound(const CField& c, const MultiIndex& m, const MultiIndex& i);

}  // namespace circspec::lattice
