#include "circspec/latticeshift.hpp"

#include "circspec/matching.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace circspec::latticeshift {

using lattice::operator+;
using lattice::operator-;
using lattice::Domain;

InconsistentS::InconsistentS(std::size_t axis, MultiIndex witness, const std::string& why)
    : std::invalid_argument("S is inconsistent with the field on axis " + std::to_string(axis + 1) + " at " +
                            lattice::to_string(witness) + ": " + why),
      axis_(axis),
      witness_(std::move(witness)) {}

BoxOverflow::BoxOverflow(const MultiIndex& i)
    : std::out_of_range("basis index " + lattice::to_string(i) + " lies outside the box") {}

MultiIndex j_map(const MultiIndex& i, const AxisSet& S) {
  MultiIndex j(i.size(), 0);
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (S[k]) j[k] = i[k];
  }
  return j;
}

bool LatticeShiftSystem::in_box(const MultiIndex& i) const {
  if (!M().contains(i)) return false;
  return std::all_of(i.begin(), i.end(), [&](std::int64_t x) { return x >= -box_ && x <= box_; });
}

void LatticeShiftSystem::require_in_box(const MultiIndex& i) const {
  if (i.size() != dim() || !in_box(i)) throw BoxOverflow(i);
}

std::vector<MultiIndex> LatticeShiftSystem::basis() const {
  std::vector<MultiIndex> out;
  MultiIndex i(dim(), -box_);
  if (dim() == 0) return {i};
  while (true) {
    if (M().contains(i)) out.push_back(i);
    std::size_t k = dim();
    while (true) {
      if (k == 0) {
        std::sort(out.begin(), out.end(), lattice::graded_less);
        return out;
      }
      --k;
      if (++i[k] <= box_) break;
      i[k] = -box_;
    }
  }
}

ExtNonNeg LatticeShiftSystem::weight(std::size_t k, const MultiIndex& i) const {
  const auto step = lattice::unit(dim(), k);
  const auto ai = a_.at(i);
  if (!ai.is_zero()) return ext_div(a_.at(i + step), ai);
  if (!S_[k]) return ExtNonNeg::zero();
  const auto j = j_map(i, S_);
  return ext_div(a_.at(j + step), a_.at(j));
}

ExtNonNeg LatticeShiftSystem::inverse_weight(std::size_t k, const MultiIndex& i) const {
  if (!S_[k]) throw NotInvertible("T_" + std::to_string(k + 1) + " is not invertible: axis outside S");
  const auto step = lattice::unit(dim(), k);
  const auto ai = a_.at(i);
  if (!ai.is_zero()) return ext_div(a_.at(i - step), ai);
  const auto j = j_map(i, S_);
  return ext_div(a_.at(j - step), a_.at(j));
}

Image LatticeShiftSystem::apply(std::size_t k, const MultiIndex& i) const {
  require_in_box(i);
  auto target = i + lattice::unit(dim(), k);
  require_in_box(target);
  return {std::move(target), weight(k, i)};
}

Image LatticeShiftSystem::apply_inverse(std::size_t k, const MultiIndex& i) const {
  require_in_box(i);
  auto target = i - lattice::unit(dim(), k);
  const auto w = inverse_weight(k, i);
  require_in_box(target);
  return {std::move(target), w};
}

Image LatticeShiftSystem::apply_monomial(const MultiIndex& m, const MultiIndex& i) const {
  if (m.size() != dim() || !M().contains(m))
    throw std::invalid_argument("monomial exponent " + lattice::to_string(m) + " lies outside M");
  require_in_box(i);
  auto target = i + m;
  require_in_box(target);
  const auto at = a_.at(target);
  if (!at.is_zero()) return {std::move(target), ext_div(at, a_.at(i))};
  for (std::size_t k = 0; k < dim(); ++k) {
    if (m[k] != 0 && !S_[k]) return {std::move(target), ExtNonNeg::zero()};
  }
  const auto j = j_map(i, S_);
  return {std::move(target), ext_div(a_.at(j + m), a_.at(j))};
}

Image LatticeShiftSystem::compose(const MultiIndex& m, const MultiIndex& i,
                                  const std::vector<std::size_t>& order) const {
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted.size() != dim() || sorted[k] != k) throw std::invalid_argument("order must permute the axes");
  }
  Image out{i, ExtNonNeg::one()};
  require_in_box(i);
  for (const auto k : order) {
    const auto steps = m[k] < 0 ? -m[k] : m[k];
    for (std::int64_t s = 0; s < steps; ++s) {
      const auto next = m[k] > 0 ? apply(k, out.target) : apply_inverse(k, out.target);
      out.factor = ext_mul(out.factor, next.factor);
      out.target = next.target;
    }
  }
  return out;
}

LatticeShiftSystem build_system(const lattice::Field& a, const AxisSet& S, std::int64_t box) {
  const auto n = a.dim();
  if (S.size() != n) throw std::invalid_argument("S has the wrong dimension");
  if (box < 0) throw std::invalid_argument("box must be nonnegative");
  const Domain M = Domain::with_free_axes(S);
  if (!M.subset_of(a.domain())) {
    for (std::size_t k = 0; k < n; ++k) {
      if (S[k] && a.domain().restricted(k))
        throw InconsistentS(k, lattice::unit(n, k, -1), "the field is only given on the cone");
    }
  }
  if (a.tail() == lattice::Tail::truncated) {
    for (const auto r : a.radii()) {
      if (box > r) throw std::invalid_argument("box must lie inside the table of a truncated field");
    }
  }
  LatticeShiftSystem sys;
  sys.S_ = S;
  sys.box_ = box;
  sys.a_ = a.domain() == M ? a : lattice::restrict_to(a, M);
  if (auto v = lattice::find_violation(sys.a_)) throw lattice::ValidationError(*v);
  for (const auto& i : sys.basis()) {
    if (sys.a_.at(i).is_zero()) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const auto next = i + lattice::unit(n, k);
      if (S[k] && sys.in_box(next) && sys.a_.at(next).is_zero())
        throw InconsistentS(k, i, "a vanishes after a step along an invertible axis");
    }
  }
  return sys;
}

LatticeShiftSystem realize(const lattice::NormField& field, std::int64_t box) {
  const auto s = lattice::infer_S(field);
  if (std::none_of(s.S.begin(), s.S.end(), [](bool b) { return b; })) return build_system(field.values, s.S, box);
  const auto c = lattice::compute_C_field(field);
  const auto matched = matching::match_target(c, lattice::zero_index(field.dim()));
  return build_system(matched.B(), c.s.S, box);
}

CommutationReport check_commutation(const LatticeShiftSystem& sys, std::size_t k, std::size_t l) {
  CommutationReport report;
  const auto n = sys.dim();
  const auto both = lattice::unit(n, k) + lattice::unit(n, l);
  for (const auto& i : sys.basis()) {
    if (!sys.in_box(i + both)) continue;
    ++report.checked;
    const auto first_l = sys.apply(l, i);
    const auto lk = ext_mul(first_l.factor, sys.apply(k, first_l.target).factor);
    const auto first_k = sys.apply(k, i);
    const auto kl = ext_mul(first_k.factor, sys.apply(l, first_k.target).factor);
    if (compare(lk, kl) != std::weak_ordering::equivalent) report.violations.push_back(i);
    if (compare(lk, sys.apply_monomial(both, i).factor) != std::weak_ordering::equivalent)
      report.closed_form_mismatches.push_back(i);
  }
  return report;
}

ExtNonNeg power_norms(const LatticeShiftSystem& sys, const MultiIndex& m) {
  std::optional<ExtNonNeg> best;
  for (const auto& i : sys.basis()) {
    if (!sys.in_box(i + m)) continue;
    const auto f = sys.apply_monomial(m, i).factor;
    best = best ? ext_max(*best, f) : f;
  }
  if (!best) throw BoxOverflow(m);
  return *best;
}

}  // namespace circspec::latticeshift
