#pragma once

// Commuting weighted shifts on l^2(M) realizing a submultiplicative field.
//
// T_k e_i = (a_{i+e_k} / a_i) e_{i+e_k} when a_i != 0. When a_i = 0 the
// weight is 0 for k outside S and is borrowed from j(i), the index with
// the coordinates outside S zeroed, for k in S. Operators act on basis
// vectors inside the cube [-box, box]^n; nothing is stored as a matrix.

#include "circspec/lattice.hpp"

#include <stdexcept>
#include <vector>

namespace circspec::latticeshift {

using lattice::AxisSet;
using lattice::MultiIndex;

class InconsistentS : public std::invalid_argument {
 public:
  InconsistentS(std::size_t axis, MultiIndex witness, const std::string& why);
  std::size_t axis() const { return axis_; }
  const MultiIndex& witness() const { return witness_; }

 private:
  std::size_t axis_;
  MultiIndex witness_;
};

class BoxOverflow : public std::out_of_range {
 public:
  explicit BoxOverflow(const MultiIndex& i);
};

class NotInvertible : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// i with the coordinates outside S set to 0.
MultiIndex j_map(const MultiIndex& i, const AxisSet& S);

/// Image of a basis vector: factor * e_target (the zero vector when factor is 0).
struct Image {
  MultiIndex target;
  ExtNonNeg factor;
};

class LatticeShiftSystem {
 public:
  std::size_t dim() const { return S_.size(); }
  const AxisSet& S() const { return S_; }
  std::int64_t box() const { return box_; }
  lattice::Domain M() const { return lattice::Domain::with_free_axes(S_); }
  /// The realized collection (a_i) on M.
  const lattice::Field& values() const { return a_; }

  /// i in M and inside the cube.
  bool in_box(const MultiIndex& i) const;
  /// Basis indices M ∩ [-box, box]^n in graded order.
  std::vector<MultiIndex> basis() const;

  /// Coefficient of T_k e_i (axes 0-based).
  ExtNonNeg weight(std::size_t k, const MultiIndex& i) const;
  /// Coefficient of T_k^{-1} e_i; throws NotInvertible for k outside S.
  ExtNonNeg inverse_weight(std::size_t k, const MultiIndex& i) const;

  /// T_k e_i. Throws BoxOverflow when i or i + e_k leaves the box.
  Image apply(std::size_t k, const MultiIndex& i) const;
  Image apply_inverse(std::size_t k, const MultiIndex& i) const;

  /// T^m e_i from the closed form: a_{i+m}/a_i if a_{i+m} != 0, else
  /// a_{j(i)+m}/a_{j(i)} when m is supported on S, else 0.
  Image apply_monomial(const MultiIndex& m, const MultiIndex& i) const;
  /// T^m e_i as a product of single steps, taking the axes in `order`
  /// (negative exponents use T_k^{-1}).
  Image compose(const MultiIndex& m, const MultiIndex& i, const std::vector<std::size_t>& order) const;

 private:
  friend LatticeShiftSystem build_system(const lattice::Field& a, const AxisSet& S, std::int64_t box);

  void require_in_box(const MultiIndex& i) const;

  AxisSet S_;
  std::int64_t box_ = 0;
  lattice::Field a_;
};

/// Builds the shifts for a field on (at least) M = M(S). The field must be
/// normalized and submultiplicative on M. Throws InconsistentS when the
/// field does not cover M or a zero pattern contradicts S, and
/// lattice::ValidationError when submultiplicativity fails.
LatticeShiftSystem build_system(const lattice::Field& a, const AxisSet& S, std::int64_t box);

/// Realization of norm data on the cone. With S empty the data are used
/// directly; otherwise they are first extended to M by the matching ladder
/// for the target 0, which keeps a on the cone.
LatticeShiftSystem realize(const lattice::NormField& field, std::int64_t box);

struct CommutationReport {
  std::size_t checked = 0;
  /// Basis indices with T_k T_l e_i != T_l T_k e_i.
  std::vector<MultiIndex> violations;
  /// Basis indices where the product differs from the two-step closed form.
  std::vector<MultiIndex> closed_form_mismatches;
};

/// Compares T_k T_l e_i, T_l T_k e_i and the closed form for every i with
/// i, i + e_k + e_l in the box.
CommutationReport check_commutation(const LatticeShiftSystem& sys, std::size_t k, std::size_t l);

/// max over basis vectors e_i with i + m in the box of the factor of T^m e_i.
ExtNonNeg power_norms(const LatticeShiftSystem& sys, const MultiIndex& m);

}  // namespace circspec::latticeshift
