#include "circspec/matching.hpp"

#include <algorithm>
#include <cmath>

namespace circspec::matching {

using lattice::AxisSet;
using lattice::Domain;
using lattice::Field;
using lattice::operator+;
using lattice::operator*;

TargetOutsideM::TargetOutsideM(MultiIndex target, std::size_t axis)
    : std::invalid_argument("target " + lattice::to_string(target) + " is negative on axis " +
                            std::to_string(axis + 1) + ", which is not in S"),
      target_(std::move(target)),
      axis_(axis) {}

EmptyASet::EmptyASet(MultiIndex i)
    : std::runtime_error("no admissible ratio for index " + lattice::to_string(i)), index_(std::move(i)) {}

PermutationPlan plan(const AxisSet& S, const MultiIndex& target) {
  if (target.size() != S.size()) throw std::invalid_argument("dimension mismatch");
  PermutationPlan p;
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (target[k] < 0 && !S[k]) throw TargetOutsideM(target, k);
  }
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (S[k] && target[k] < 0) p.order.push_back(k);
  }
  p.negatives = p.order.size();
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (S[k] && target[k] >= 0) p.order.push_back(k);
  }
  return p;
}

Domain level_domain(const AxisSet& S, const PermutationPlan& p, std::size_t l) {
  if (l > p.order.size()) throw std::invalid_argument("level exceeds the number of invertible axes");
  std::vector<bool> restricted(S.size());
  for (std::size_t k = 0; k < S.size(); ++k) restricted[k] = !S[k];
  for (std::size_t q = l; q < p.order.size(); ++q) restricted[p.order[q]] = true;
  return Domain(std::move(restricted));
}

bool in_sector(const AxisSet& S, const PermutationPlan& p, std::size_t l, const MultiIndex& i) {
  if (!Domain::with_free_axes(S).contains(i)) return false;
  for (std::size_t q = 0; q < p.order.size(); ++q) {
    const auto x = i[p.order[q]];
    if (q < l ? x > 0 : x < 0) return false;
  }
  return true;
}

LevelField initial_level(const lattice::CField& c, const PermutationPlan& p) {
  if (!c.values.exact()) throw InexactC("C values are windowed; matching needs a clamping field");
  const auto m = c.M();
  return LevelField{0, lattice::restrict_to(c.values, m), level_domain(c.s.S, p, 0)};
}

LevelField ladder_step(const LevelField& previous, const AxisSet& S, const PermutationPlan& p) {
  const std::size_t l = previous.level + 1;
  const auto m = Domain::with_free_axes(S);
  Field next = lattice::ratio_sup(previous.values, previous.R, m);
  for (std::size_t t = 0; t < next.table_size(); ++t) {
    const auto i = next.index_at(t);
    if (m.contains(i) && next.empty_flags()[t]) throw EmptyASet(i);
  }
  return LevelField{l, std::move(next), level_domain(S, p, l)};
}

MatchResult match_target(const lattice::CField& c, const MultiIndex& target) {
  const auto& S = c.s.S;
  MatchResult out{plan(S, target), S, {}};
  out.levels.push_back(initial_level(c, out.plan));
  for (std::size_t l = 1; l <= out.plan.order.size(); ++l) {
    out.levels.push_back(ladder_step(out.levels.back(), S, out.plan));
  }
  return out;
}

MatchResult match_target(const lattice::NormField& field, const MultiIndex& target) {
  if (!field.values.exact()) throw InexactC("C values are windowed; matching needs a clamping field");
  return match_target(lattice::compute_C_field(field), target);
}

CBound min_monomial_norm(const lattice::CField& c, const MultiIndex& j, std::int64_t k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be positive");
  if (!c.M().contains(j)) throw std::invalid_argument("monomial index lies outside M");
  ExtNonNeg best = ExtNonNeg::infinity();
  bool exact = c.values.exact();
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const auto ck = c.at(k * j);
    exact = exact && ck.exact;
    best = ext_min(best, ext_root(ck.value, static_cast<std::uint64_t>(k)));
  }
  if (exact && (best.is_exact() || best.is_infinite())) return CBound::certified(best);
  return CBound::windowed(best, Sense::estimate);
}

LevelReport check_level(const LevelField& level, const lattice::NormField& field, const lattice::CField& c,
                        std::int64_t box) {
  const auto& b = level.values;
  const auto m = b.domain();
  const auto n = b.dim();
  LevelReport report;
  std::vector<MultiIndex> in_box;
  for (const auto& i : b.indices_in_box(box)) in_box.push_back(i);
  auto inside = [&](const MultiIndex& i) {
    if (!m.contains(i)) return false;
    for (auto x : i) {
      if (x < -box || x > box) return false;
    }
    return true;
  };
  for (const auto& i : in_box) {
    if (lattice::is_nonnegative(i) && field.values.covers(i) && !(b.at(i) == field.values.at(i)))
      ++report.cone_mismatches;
    if (compare(b.at(i), c.at(i).value) == std::weak_ordering::less) ++report.below_C;
  }
  std::vector<ExtNonNeg> axis_up(n), axis_down(n);
  for (std::size_t k = 0; k < n; ++k) {
    axis_up[k] = b.at(lattice::unit(n, k, 1));
    const auto down = lattice::unit(n, k, -1);
    if (m.contains(down)) axis_down[k] = b.at(down);
  }
  // Cached values, logs and axis-product factors per index of the box.
  std::vector<ExtNonNeg> value(in_box.size()), factor(in_box.size());
  std::vector<double> log_value(in_box.size()), log_factor(in_box.size());
  std::vector<char> in_R(in_box.size());
  for (std::size_t t = 0; t < in_box.size(); ++t) {
    const auto& j = in_box[t];
    value[t] = b.at(j);
    log_value[t] = value[t].log();
    in_R[t] = level.R.contains(j);
    ExtNonNeg f = ExtNonNeg::one();
    for (std::size_t k = 0; k < n; ++k) {
      if (j[k] == 0) continue;
      const auto& step = j[k] > 0 ? axis_up[k] : axis_down[k];
      f = ext_mul(f, ext_pow(step, static_cast<std::uint64_t>(j[k] > 0 ? j[k] : -j[k])));
    }
    factor[t] = f;
    log_factor[t] = f.log();
  }
  // leq(lhs, x * y) with a floating-point shortcut for clear cases.
  auto below = [](const ExtNonNeg& lhs, double log_lhs, const ExtNonNeg& x, double log_x, const ExtNonNeg& y,
                  double log_y) {
    const double margin = log_x + log_y - log_lhs;
    if (std::isfinite(margin) && margin > 1e-9 && !x.is_zero() && !y.is_zero()) return true;
    return leq(lhs, ext_mul(x, y));
  };
  for (std::size_t a = 0; a < in_box.size(); ++a) {
    for (std::size_t c2 = 0; c2 < in_box.size(); ++c2) {
      const auto s = in_box[a] + in_box[c2];
      if (!inside(s)) continue;
      const auto bs = b.at(s);
      const double ls = bs.log();
      if (in_R[a] && in_R[c2] && !below(bs, ls, value[a], log_value[a], value[c2], log_value[c2]))
        ++report.submultiplicative;
      if (!below(bs, ls, value[a], log_value[a], factor[c2], log_factor[c2])) ++report.axis_bound;
    }
  }
  return report;
}

}  // namespace circspec::matching
