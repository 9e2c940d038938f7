#pragma once

// Matching ladder: from a norm field and a target index t in M, build a
// collection B on M that is submultiplicative on all of M, equals a on the
// cone, dominates C, and satisfies B_t = C_t.
//
// Level 0 is C restricted to M. Level l takes ratio suprema over
// R_{l-1} = {i in M : i_k >= 0 for the axes k_l, ..., k_p still pending},
// where the axis order puts the negative coordinates of t first.

#include "circspec/lattice.hpp"

#include <stdexcept>
#include <vector>

namespace circspec::matching {

using lattice::MultiIndex;

class TargetOutsideM : public std::invalid_argument {
 public:
  TargetOutsideM(MultiIndex target, std::size_t axis);
  const MultiIndex& target() const { return target_; }
  std::size_t axis() const { return axis_; }

 private:
  MultiIndex target_;
  std::size_t axis_;
};

class InexactC : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyASet : public std::runtime_error {
 public:
  explicit EmptyASet(MultiIndex i);
  const MultiIndex& index() const { return index_; }

 private:
  MultiIndex index_;
};

struct PermutationPlan {
  /// Axes of S (0-based); the first `negatives` are where the target is negative.
  std::vector<std::size_t> order;
  std::size_t negatives = 0;
};

/// Negative-coordinate axes first, ascending within both groups.
PermutationPlan plan(const lattice::AxisSet& S, const MultiIndex& target);

/// R_l: M with the axes order[l..p-1] restricted.
lattice::Domain level_domain(const lattice::AxisSet& S, const PermutationPlan& p, std::size_t l);

struct LevelField {
  std::size_t level = 0;
  lattice::Field values;  // over M
  lattice::Domain R;      // R_level
};

/// B^0 = C on M. Throws InexactC unless the C values are exact.
LevelField initial_level(const lattice::CField& c, const PermutationPlan& p);

/// B^{l} from B^{l-1}. Throws EmptyASet when an index of M has no
/// admissible ratio.
LevelField ladder_step(const LevelField& previous, const lattice::AxisSet& S, const PermutationPlan& p);

struct MatchResult {
  PermutationPlan plan;
  lattice::AxisSet S;
  std::vector<LevelField> levels;

  const lattice::Field& B() const { return levels.back().values; }
};

MatchResult match_target(const lattice::CField& c, const MultiIndex& target);
MatchResult match_target(const lattice::NormField& field, const MultiIndex& target);

/// min_{1<=k<=k_max} C_{kj}^{1/k}.
CBound min_monomial_norm(const lattice::CField& c, const MultiIndex& j, std::int64_t k_max);

/// Index sector S_l = {i in M : i_{k_1..k_l} <= 0, i_{k_{l+1}..k_p} >= 0}
/// on which B agrees with C.
bool in_sector(const lattice::AxisSet& S, const PermutationPlan& p, std::size_t l, const MultiIndex& i);

/// Violation counts of one ladder level on M ∩ [-box, box]^n.
struct LevelReport {
  std::size_t cone_mismatches = 0;     // B != a on the cone ∩ box
  std::size_t submultiplicative = 0;   // failures of B_{i+j} <= B_i B_j on R_l ∩ box
  std::size_t axis_bound = 0;          // failures of the axis-product bound on M ∩ box
  std::size_t below_C = 0;             // indices of M ∩ box with B < C
};

LevelReport check_level(const LevelField& level, const lattice::NormField& field, const lattice::CField& c,
                        std::int64_t box);

}  // namespace circspec::matching
