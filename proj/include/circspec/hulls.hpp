#pragma once

// Circled hulls described by monomial constraints |s^i| <= b_i.
//
// A circled set is determined by its modulus profiles, so every test works
// on u_k = log|s_k|, where each constraint is the half-space
// sum_k i_k u_k <= log b_i.

#include "circspec/lattice.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace circspec::hulls {

using lattice::AxisSet;
using lattice::MultiIndex;

enum class HullKind {
  polynomial,  // indices in the cone
  rational,    // indices in M, which may have negative coordinates on S
};

const char* to_string(HullKind kind);

struct Constraint {
  MultiIndex index;
  ExtNonNeg bound;
};

class HullSpec {
 public:
  HullSpec() = default;
  /// Sorts constraints in graded order. Throws std::invalid_argument on
  /// dimension mismatch, duplicates, or indices outside the kind's domain
  /// (the cone, or M for the given S).
  HullSpec(std::size_t n, HullKind kind, std::vector<Constraint> constraints, AxisSet S = {});

  std::size_t dim() const { return n_; }
  HullKind kind() const { return kind_; }
  const AxisSet& S() const { return S_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  /// log of each bound, in constraint order.
  const std::vector<double>& log_bounds() const { return log_bounds_; }
  /// Bounded: a constraint with index e_k and finite bound exists for every k.
  bool bounded() const;

 private:
  std::size_t n_ = 0;
  HullKind kind_ = HullKind::polynomial;
  AxisSet S_;
  std::vector<Constraint> constraints_;
  std::vector<double> log_bounds_;
};

/// {|s^i| <= a_i : i in the cone ∩ [-box, box]^n}.
HullSpec polynomial_hull(const lattice::NormField& field, std::int64_t box);
/// {|s^i| <= C_i : i in M ∩ [-box, box]^n}.
HullSpec rational_hull(const lattice::CField& c);
/// Constraints from the values of a field on domain ∩ [-box, box]^n.
HullSpec hull_of(const lattice::Field& values, HullKind kind, const AxisSet& S, std::int64_t box);
/// Constraints a_k, k = 1..N, of a sequence.
HullSpec disc_hull(const sequences::NormSequence& seq);
/// Constraints min_{1<=k<=k_max, ki in box} a_{ki}^{1/k} over the cone.
HullSpec surrogate_hull(const lattice::NormField& field, std::int64_t box, std::int64_t k_max);

using Point = std::vector<std::complex<double>>;
/// log|s_k|, -infinity for a zero coordinate.
using LogPoint = std::vector<double>;

LogPoint to_log(const Point& s);

/// Log-space half-space test with relative tolerance `tol`.
bool membership(const HullSpec& spec, const Point& s, double tol = kDefaultTolerance);
bool membership_log(const HullSpec& spec, const LogPoint& u, double tol = kDefaultTolerance);
/// Oracle: evaluates prod |s_k|^{i_k} directly.
bool membership_direct(const HullSpec& spec, const Point& s, double tol = kDefaultTolerance);
/// Exact test for rational moduli; float bounds are compared with `tol`.
bool membership_exact(const HullSpec& spec, const std::vector<Rational>& moduli,
                      double tol = kDefaultTolerance);

/// First violated constraint in graded order, if any.
std::optional<MultiIndex> separating_monomial(const HullSpec& spec, const Point& s,
                                              double tol = kDefaultTolerance);
/// Every violated constraint index.
std::vector<MultiIndex> violated_monomials(const HullSpec& spec, const Point& s,
                                           double tol = kDefaultTolerance);

/// Drops constraints implied by nonnegative combinations of the others
/// (infinite bounds are always dropped). The result is irredundant.
HullSpec reduce_constraints(const HullSpec& spec, double tol = kDefaultTolerance);

class MemberError : public std::invalid_argument {
 public:
  MemberError(const std::string& what, Point point) : std::invalid_argument(what), point_(std::move(point)) {}
  const Point& point() const { return point_; }

 private:
  Point point_;
};

/// Points f(t) for t = 0, 1/steps, ..., 1: moduli r^{1-t} s^t and phases
/// interpolated linearly. Throws MemberError if p or q is outside, and
/// std::invalid_argument for a zero coordinate.
std::vector<Point> connectivity_witness(const HullSpec& spec, const Point& p, const Point& q, int steps);

struct SectionSample {
  double modulus;
  bool inside;
};

/// Samples |s_axis| over [lo, hi] at `resolution` evenly spaced moduli
/// with the other moduli fixed (the entry at `axis` is ignored).
std::vector<SectionSample> cross_section(const HullSpec& spec, const std::vector<double>& fixed,
                                         std::size_t axis, double lo, double hi, int resolution,
                                         double tol = kDefaultTolerance);

/// Modulus interval of the section along `axis` with exact rational moduli
/// elsewhere. Bounds are exact when the required roots are.
struct SectionInterval {
  ExtNonNeg lower;
  ExtNonNeg upper;  // infinite when unbounded
  bool empty = false;
};

SectionInterval section_interval(const HullSpec& spec, const std::vector<Rational>& fixed, std::size_t axis);

class HullViolation : public std::runtime_error {
 public:
  HullViolation(Point point, MultiIndex monomial);
  const Point& point() const { return point_; }
  const MultiIndex& monomial() const { return monomial_; }

 private:
  Point point_;
  MultiIndex monomial_;
};

/// Norm data with a finite point set standing in for the joint spectrum.
struct SpectrumModel {
  HullSpec norms;
  std::vector<Point> spectrum;
};

/// Adds K to the spectrum. Every point of K must satisfy the norm
/// constraints, so no norm changes; otherwise throws HullViolation.
SpectrumModel augment_spectrum(const SpectrumModel& model, const std::vector<Point>& K,
                               double tol = kDefaultTolerance);

}  // namespace circspec::hulls
