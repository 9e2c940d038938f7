#include "circspec/hulls.hpp"

#include "circspec/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace circspec::hulls {

using lattice::operator*;
using lattice::Domain;

const char* to_string(HullKind kind) {
  return kind == HullKind::polynomial ? "polynomial" : "rational";
}

HullSpec::HullSpec(std::size_t n, HullKind kind, std::vector<Constraint> constraints, AxisSet S)
    : n_(n), kind_(kind), S_(S.empty() ? AxisSet(n, false) : std::move(S)), constraints_(std::move(constraints)) {
  if (S_.size() != n_) throw std::invalid_argument("S has the wrong dimension");
  if (kind_ == HullKind::polynomial && std::find(S_.begin(), S_.end(), true) != S_.end())
    throw std::invalid_argument("a polynomial hull has no invertible axes");
  const Domain domain = Domain::with_free_axes(S_);
  for (const auto& c : constraints_) {
    if (c.index.size() != n_) throw std::invalid_argument("constraint index has the wrong dimension");
    if (!domain.contains(c.index))
      throw std::invalid_argument("constraint index " + lattice::to_string(c.index) + " lies outside the domain");
  }
  std::sort(constraints_.begin(), constraints_.end(),
            [](const Constraint& a, const Constraint& b) { return lattice::graded_less(a.index, b.index); });
  for (std::size_t t = 1; t < constraints_.size(); ++t) {
    if (constraints_[t].index == constraints_[t - 1].index)
      throw std::invalid_argument("duplicate constraint " + lattice::to_string(constraints_[t].index));
  }
  log_bounds_.reserve(constraints_.size());
  for (const auto& c : constraints_) log_bounds_.push_back(c.bound.log());
}

bool HullSpec::bounded() const {
  for (std::size_t k = 0; k < n_; ++k) {
    const auto e = lattice::unit(n_, k);
    const bool found = std::any_of(constraints_.begin(), constraints_.end(), [&](const Constraint& c) {
      return c.index == e && c.bound.is_finite();
    });
    if (!found) return false;
  }
  return true;
}

HullSpec hull_of(const lattice::Field& values, HullKind kind, const AxisSet& S, std::int64_t box) {
  const auto n = values.dim();
  const AxisSet axes = kind == HullKind::polynomial || S.empty() ? AxisSet(n, false) : S;
  const Domain domain = Domain::with_free_axes(axes);
  std::vector<Constraint> out;
  for (const auto& i : values.indices_in_box(box)) {
    if (lattice::is_zero(i) || !domain.contains(i)) continue;
    out.push_back({i, values.at(i)});
  }
  return HullSpec(n, kind, std::move(out), axes);
}

HullSpec polynomial_hull(const lattice::NormField& field, std::int64_t box) {
  return hull_of(field.values, HullKind::polynomial, {}, box);
}

HullSpec rational_hull(const lattice::CField& c) {
  return hull_of(c.values, HullKind::rational, c.s.S, c.box);
}

HullSpec disc_hull(const sequences::NormSequence& seq) {
  std::vector<Constraint> out;
  for (std::int64_t k = 1; k <= seq.last_index(); ++k) out.push_back({{k}, seq.values()[static_cast<std::size_t>(k)]});
  return HullSpec(1, HullKind::polynomial, std::move(out));
}

HullSpec surrogate_hull(const lattice::NormField& field, std::int64_t box, std::int64_t k_max) {
  const auto n = field.dim();
  std::vector<Constraint> out;
  for (const auto& i : field.values.indices_in_box(box)) {
    if (lattice::is_zero(i) || !lattice::is_nonnegative(i)) continue;
    ExtNonNeg best = ExtNonNeg::infinity();
    for (std::int64_t k = 1; k <= k_max; ++k) {
      const auto ki = k * i;
      if (*std::max_element(ki.begin(), ki.end()) > box || !field.values.covers(ki)) break;
      best = ext_min(best, ext_root(field.values.at(ki), static_cast<std::uint64_t>(k)));
    }
    out.push_back({i, best});
  }
  return HullSpec(n, HullKind::polynomial, std::move(out));
}

LogPoint to_log(const Point& s) {
  LogPoint u(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double r = std::abs(s[k]);
    u[k] = r == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(r);
  }
  return u;
}

namespace {

void check_dim(const HullSpec& spec, std::size_t size) {
  if (size != spec.dim()) throw std::invalid_argument("point has the wrong dimension");
}

// sum_k i_k u_k <= log b + log(1 + tol), with the -infinity conventions.
bool satisfies(const Constraint& c, double lb, const LogPoint& u, double slack) {
  if (c.bound.is_infinite()) return true;
  double sum = 0.0;
  bool vanishes = false;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto e = c.index[k];
    if (e == 0) continue;
    if (std::isinf(u[k])) {
      if (e < 0) return false;
      vanishes = true;
      continue;
    }
    sum += static_cast<double>(e) * u[k];
  }
  if (vanishes) return true;
  if (std::isinf(lb)) return false;
  return sum <= lb + slack;
}

}  // namespace

bool membership_log(const HullSpec& spec, const LogPoint& u, double tol) {
  check_dim(spec, u.size());
  const double slack = std::log1p(tol);
  const auto& cons = spec.constraints();
  const auto& logs = spec.log_bounds();
  for (std::size_t t = 0; t < cons.size(); ++t) {
    if (!satisfies(cons[t], logs[t], u, slack)) return false;
  }
  return true;
}

bool membership(const HullSpec& spec, const Point& s, double tol) {
  return membership_log(spec, to_log(s), tol);
}

bool membership_direct(const HullSpec& spec, const Point& s, double tol) {
  check_dim(spec, s.size());
  for (const auto& c : spec.constraints()) {
    if (c.bound.is_infinite()) continue;
    double value = 1.0;
    bool fails = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto e = c.index[k];
      if (e == 0) continue;
      const double r = std::abs(s[k]);
      if (r == 0.0 && e < 0) fails = true;
      value *= std::pow(r, static_cast<double>(e));
    }
    if (fails) return false;
    if (!(value <= c.bound.to_double() * (1.0 + tol))) return false;
  }
  return true;
}

bool membership_exact(const HullSpec& spec, const std::vector<Rational>& moduli, double tol) {
  check_dim(spec, moduli.size());
  std::vector<double> logs(moduli.size());
  for (std::size_t k = 0; k < moduli.size(); ++k) {
    if (moduli[k] < 0) throw std::invalid_argument("moduli must be nonnegative");
    logs[k] = moduli[k] == 0 ? -std::numeric_limits<double>::infinity()
                             : std::log(moduli[k].convert_to<double>());
  }
  for (const auto& c : spec.constraints()) {
    if (c.bound.is_infinite()) continue;
    bool vanishes = false;
    double sum = 0.0;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
      const auto e = c.index[k];
      if (e == 0) continue;
      if (moduli[k] == 0) {
        if (e < 0) return false;
        vanishes = true;
      } else {
        sum += static_cast<double>(e) * logs[k];
      }
    }
    if (vanishes) continue;
    if (c.bound.is_zero()) return false;
    // Floating logs settle all but near-ties; those are decided exactly.
    const double gap = c.bound.log() - sum;
    if (gap > 1e-6) continue;
    if (gap < -1e-6 && c.bound.is_exact()) return false;
    Rational value(1);
    for (std::size_t k = 0; k < moduli.size(); ++k) {
      if (c.index[k] != 0) value *= rational_pow(moduli[k], c.index[k]);
    }
    if (!leq(ExtNonNeg::exact(value), c.bound, tol)) return false;
  }
  return true;
}

std::optional<MultiIndex> separating_monomial(const HullSpec& spec, const Point& s, double tol) {
  check_dim(spec, s.size());
  const auto u = to_log(s);
  const double slack = std::log1p(tol);
  const auto& cons = spec.constraints();
  for (std::size_t t = 0; t < cons.size(); ++t) {
    if (!satisfies(cons[t], spec.log_bounds()[t], u, slack)) return cons[t].index;
  }
  return std::nullopt;
}

std::vector<MultiIndex> violated_monomials(const HullSpec& spec, const Point& s, double tol) {
  check_dim(spec, s.size());
  const auto u = to_log(s);
  const double slack = std::log1p(tol);
  const auto& cons = spec.constraints();
  std::vector<MultiIndex> out;
  for (std::size_t t = 0; t < cons.size(); ++t) {
    if (!satisfies(cons[t], spec.log_bounds()[t], u, slack)) out.push_back(cons[t].index);
  }
  return out;
}

HullSpec reduce_constraints(const HullSpec& spec, double tol) {
  // Zero bounds are not half-spaces; they are kept and never used to imply
  // other constraints.
  std::vector<Constraint> fixed;
  std::vector<Constraint> active;
  for (const auto& c : spec.constraints()) {
    if (c.bound.is_infinite()) continue;
    (c.bound.is_zero() ? fixed : active).push_back(c);
  }
  const auto n = spec.dim();
  std::vector<char> alive(active.size(), 1);
  // Larger indices are tried first, so the smallest describing set survives.
  for (std::size_t t = active.size(); t-- > 0;) {
    std::vector<std::size_t> others;
    for (std::size_t s = 0; s < active.size(); ++s) {
      if (s != t && alive[s]) others.push_back(s);
    }
    if (others.empty()) continue;
    // Implied iff i = sum lambda_j j with lambda >= 0 and
    // sum lambda_j log b_j <= log b_i.
    std::vector<std::vector<double>> A(n, std::vector<double>(others.size()));
    std::vector<double> b(n), cost(others.size());
    for (std::size_t k = 0; k < n; ++k) {
      b[k] = static_cast<double>(active[t].index[k]);
      for (std::size_t s = 0; s < others.size(); ++s)
        A[k][s] = static_cast<double>(active[others[s]].index[k]);
    }
    for (std::size_t s = 0; s < others.size(); ++s) cost[s] = active[others[s]].bound.log();
    const auto r = lp::minimize(A, b, cost);
    const double target = active[t].bound.log();
    if (r.status == lp::Status::unbounded ||
        (r.status == lp::Status::optimal && r.value <= target + tol * (1.0 + std::abs(target)))) {
      alive[t] = 0;
    }
  }
  for (std::size_t t = 0; t < active.size(); ++t) {
    if (alive[t]) fixed.push_back(active[t]);
  }
  return HullSpec(n, spec.kind(), std::move(fixed), spec.S());
}

std::vector<Point> connectivity_witness(const HullSpec& spec, const Point& p, const Point& q, int steps) {
  check_dim(spec, p.size());
  check_dim(spec, q.size());
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (!membership(spec, p)) throw MemberError("start point lies outside the hull", p);
  if (!membership(spec, q)) throw MemberError("end point lies outside the hull", q);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (std::abs(p[k]) == 0.0 || std::abs(q[k]) == 0.0)
      throw std::invalid_argument("path endpoints need nonzero coordinates");
  }
  std::vector<Point> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    Point x(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double modulus = std::exp((1 - t) * std::log(std::abs(p[k])) + t * std::log(std::abs(q[k])));
      const double phase = (1 - t) * std::arg(p[k]) + t * std::arg(q[k]);
      x[k] = std::polar(modulus, phase);
    }
    path.push_back(std::move(x));
  }
  return path;
}

std::vector<SectionSample> cross_section(const HullSpec& spec, const std::vector<double>& fixed,
                                         std::size_t axis, double lo, double hi, int resolution, double tol) {
  check_dim(spec, fixed.size());
  if (axis >= spec.dim()) throw std::invalid_argument("axis out of range");
  if (resolution < 2 || !(lo >= 0) || !(hi > lo)) throw std::invalid_argument("need 0 <= lo < hi and resolution >= 2");
  LogPoint u(spec.dim());
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    if (k == axis) continue;
    if (spec.kind() == HullKind::rational && spec.S()[k] && !(fixed[k] > 0))
      throw std::invalid_argument("fixed moduli on invertible axes must be positive");
    if (fixed[k] < 0) throw std::invalid_argument("moduli must be nonnegative");
    u[k] = fixed[k] == 0 ? -std::numeric_limits<double>::infinity() : std::log(fixed[k]);
  }
  std::vector<SectionSample> out;
  out.reserve(static_cast<std::size_t>(resolution));
  for (int s = 0; s < resolution; ++s) {
    const double r = lo + (hi - lo) * s / (resolution - 1);
    u[axis] = r == 0 ? -std::numeric_limits<double>::infinity() : std::log(r);
    out.push_back({r, membership_log(spec, u, tol)});
  }
  return out;
}

SectionInterval section_interval(const HullSpec& spec, const std::vector<Rational>& fixed, std::size_t axis) {
  check_dim(spec, fixed.size());
  if (axis >= spec.dim()) throw std::invalid_argument("axis out of range");
  SectionInterval out{ExtNonNeg::zero(), ExtNonNeg::infinity(), false};
  for (const auto& c : spec.constraints()) {
    if (c.bound.is_infinite()) continue;
    Rational rest(1);
    bool vanishes = false;
    for (std::size_t k = 0; k < spec.dim(); ++k) {
      const auto e = c.index[k];
      if (k == axis || e == 0) continue;
      if (fixed[k] == 0) {
        if (e < 0) {
          out.empty = true;
          return out;
        }
        vanishes = true;
        continue;
      }
      rest *= rational_pow(fixed[k], e);
    }
    if (vanishes) continue;
    const auto e = c.index[axis];
    const ExtNonNeg p = ExtNonNeg::exact(rest);
    if (e == 0) {
      if (!leq(p, c.bound)) out.empty = true;
    } else if (e > 0) {
      out.upper = ext_min(out.upper, ext_root(ext_div(c.bound, p), static_cast<std::uint64_t>(e)));
    } else if (c.bound.is_zero()) {
      out.empty = true;
    } else {
      out.lower = ext_max(out.lower, ext_root(ext_div(p, c.bound), static_cast<std::uint64_t>(-e)));
    }
  }
  if (compare(out.lower, out.upper) == std::weak_ordering::greater) out.empty = true;
  return out;
}

HullViolation::HullViolation(Point point, MultiIndex monomial)
    : std::runtime_error("point violates the norm constraint of monomial " + lattice::to_string(monomial)),
      point_(std::move(point)),
      monomial_(std::move(monomial)) {}

SpectrumModel augment_spectrum(const SpectrumModel& model, const std::vector<Point>& K, double tol) {
  SpectrumModel out = model;
  for (const auto& s : K) {
    if (auto m = separating_monomial(model.norms, s, tol)) throw HullViolation(s, *m);
    if (std::find(out.spectrum.begin(), out.spectrum.end(), s) == out.spectrum.end()) out.spectrum.push_back(s);
  }
  return out;
}

}  // namespace circspec::hulls
