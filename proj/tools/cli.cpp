#include "cli.hpp"

#include "circspec/hulls.hpp"
#include "circspec/io.hpp"
#include "circspec/latticeshift.hpp"
#include "circspec/matching.hpp"
#include "circspec/sequences.hpp"
#include "circspec/shift1d.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace circspec::cli {

namespace {

using io::Json;

struct RunConfig {
  std::string input;
  std::string field;
  std::string hull;
  std::string kind;
  std::string base = "2";
  std::string radius;
  std::int64_t n = 0;
  std::int64_t window = 0;
  std::int64_t box = -1;
  std::string point;
  std::string target;
  std::string j;
  std::int64_t k_max = 4;
  std::string hull_kind = "rational";
  std::size_t axis = 1;
  std::string fixed;
  double lo = 0.0;
  double hi = 2.0;
  int resolution = 64;
  bool exponents = false;
  double tol = kDefaultTolerance;
  std::uint64_t seed = 0x5eed;
  std::string format;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data that violate a required property (exit code 1).
class DataViolation : public std::runtime_error {
 public:
  DataViolation(const std::string& what, Json report) : std::runtime_error(what), report_(std::move(report)) {}
  const Json& report() const { return report_; }

 private:
  Json report_;
};

lattice::ScanOptions scan_options(const RunConfig& cfg) {
  lattice::ScanOptions opts;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  return opts;
}

Rational positive_rational(const std::string& text, const char* what) {
  Rational q;
  try {
    q = parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must be a rational number, got \"" + text + "\"");
  }
  if (q <= 0) throw UsageError(std::string(what) + " must be positive");
  return q;
}

Json violation_json(const std::string& kind, const Json& i, const Json& j, const std::string& message) {
  Json out;
  out["valid"] = false;
  out["violation"] = kind;
  out["i"] = i;
  out["j"] = j;
  out["message"] = message;
  return out;
}

sequences::NormSequence load_sequence(const RunConfig& cfg) {
  const auto raw = io::sequence_from_json(io::read_json_file(cfg.input));
  if (auto v = sequences::find_violation(raw, cfg.tol)) {
    throw DataViolation(v->message, violation_json(sequences::to_string(v->kind), v->i, v->j, v->message));
  }
  return sequences::validate(raw);
}

lattice::NormField load_field(const RunConfig& cfg) {
  auto raw = io::field_from_json(io::read_json_file(cfg.field));
  if (cfg.box >= 0) raw.box = std::max(raw.box, cfg.box);
  try {
    return lattice::validate_field(raw, scan_options(cfg));
  } catch (const lattice::ValidationError& e) {
    const auto& v = e.violation();
    throw DataViolation(v.message, violation_json(sequences::to_string(v.kind), io::to_json(v.i), io::to_json(v.j),
                                                  v.message));
  }
}

lattice::CField load_cfield(const RunConfig& cfg) {
  auto c = lattice::compute_C_field(load_field(cfg));
  if (cfg.box >= 0) c.box = cfg.box;
  return c;
}

hulls::HullSpec load_hull(const RunConfig& cfg) {
  if (!cfg.hull.empty()) return io::hull_from_json(io::read_json_file(cfg.hull));
  if (cfg.field.empty()) throw UsageError("one of --field or --hull is required");
  if (cfg.hull_kind == "polynomial") {
    const auto f = load_field(cfg);
    return hulls::polynomial_hull(f, cfg.box >= 0 ? cfg.box : f.box);
  }
  return hulls::rational_hull(load_cfield(cfg));
}

std::string format_of(const RunConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

void print(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

std::string csv_value(const ExtNonNeg& x) {
  const auto j = io::to_json(x);
  return j.is_string() ? j.get<std::string>() : j.dump();
}

// Human-readable bound: "≥ v", "≤ v" or "≈ v" unless exact.
std::string qualified(const CBound& b) {
  const auto v = csv_value(b.value);
  if (b.exact || b.sense == Sense::exact) return v;
  switch (b.sense) {
    case Sense::lower:
      return "≥ " + v;
    case Sense::upper:
      return "≤ " + v;
    default:
      return "≈ " + v;
  }
}

Json bound_json(const CBound& b) {
  auto j = io::to_json(b);
  j["display"] = qualified(b);
  return j;
}

// ---------------------------------------------------------------------------

int gen_seq(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 1) throw UsageError("--n must be at least 1");
  sequences::NormSequence seq;
  if (cfg.kind == "unbounded-ratio") {
    const auto base = positive_rational(cfg.base, "--base");
    if (base <= 1) throw UsageError("--base must exceed 1");
    seq = sequences::gen_unbounded_ratio(base, cfg.n);
  } else if (cfg.kind == "inner-radius") {
    if (cfg.radius.empty()) throw UsageError("--radius is required for inner-radius");
    const auto r = positive_rational(cfg.radius, "--radius");
    if (r > 1) throw UsageError("--radius must lie in (0, 1]");
    seq = sequences::gen_inner_radius(r, cfg.n);
  } else if (cfg.kind == "constant") {
    seq = sequences::constant_sequence(cfg.n);
  } else {
    throw UsageError("unknown --kind \"" + cfg.kind + "\"");
  }
  print(out, cfg.exponents ? io::power_form_to_json(seq) : io::to_json(seq));
  return kOk;
}

int validate(const RunConfig& cfg, std::ostream& out) {
  const auto doc = io::read_json_file(cfg.input);
  Json report;
  try {
    if (doc.is_object() && doc.contains("n")) {
      RunConfig c = cfg;
      c.field = cfg.input;
      const auto f = load_field(c);
      const auto s = lattice::infer_S(f);
      report["valid"] = true;
      report["type"] = "field";
      report["n"] = f.dim();
      report["box"] = f.box;
      report["S"] = io::axes_to_json(s.S);
      report["sampled"] = f.sampled;
    } else {
      const auto seq = load_sequence(cfg);
      report["valid"] = true;
      report["type"] = "sequence";
      report["N"] = seq.last_index();
      report["has_zero"] = seq.has_zero();
    }
  } catch (const DataViolation& v) {
    print(out, v.report());
    return kViolation;
  }
  print(out, report);
  return kOk;
}

int annulus(const RunConfig& cfg, std::ostream& out) {
  const auto seq = load_sequence(cfg);
  if (seq.last_index() < 1) throw UsageError("the sequence needs at least two terms");
  const auto k_max = cfg.window > 0 ? cfg.window : seq.last_index();
  if (cfg.window > 0 && cfg.window < 2) throw UsageError("--window must be at least 2");
  if (k_max > seq.last_index()) throw UsageError("--window exceeds the sequence length");
  const auto a = sequences::annulus(seq, k_max);
  auto j = io::to_json(a);
  j["inner"] = bound_json(a.inner);
  j["outer"] = bound_json(a.outer);
  j["window"] = k_max;
  print(out, j);
  return kOk;
}

int cfield(const RunConfig& cfg, std::ostream& out) {
  const auto c = load_cfield(cfg);
  if (format_of(cfg, "json") == "csv") {
    for (std::size_t k = 0; k < c.values.dim(); ++k) out << "i" << k + 1 << ',';
    out << "C,exact,sense,display\n";
    for (const auto& i : c.indices()) {
      const auto b = c.at(i);
      for (const auto x : i) out << x << ',';
      out << csv_value(b.value) << ',' << (b.exact ? "true" : "false") << ',' << io::to_string(b.sense) << ',' << qualified(b)
          << '\n';
    }
    return kOk;
  }
  print(out, io::to_json(c));
  return kOk;
}

int hull_member(const RunConfig& cfg, std::ostream& out) {
  const auto h = load_hull(cfg);
  const auto p = io::parse_point(cfg.point);
  if (p.size() != h.dim()) throw UsageError("--point has the wrong number of coordinates");
  const auto sep = hulls::separating_monomial(h, p, cfg.tol);
  Json j;
  j["member"] = !sep.has_value();
  j["separating"] = sep ? io::to_json(*sep) : Json(nullptr);
  print(out, j);
  return kOk;
}

int hull_section(const RunConfig& cfg, std::ostream& out) {
  const auto h = load_hull(cfg);
  if (cfg.axis < 1 || cfg.axis > h.dim()) throw UsageError("--axis out of range");
  std::vector<double> fixed(h.dim(), 1.0);
  if (!cfg.fixed.empty()) {
    const auto p = io::parse_point(cfg.fixed);
    if (p.size() != h.dim()) throw UsageError("--fixed has the wrong number of coordinates");
    for (std::size_t k = 0; k < p.size(); ++k) fixed[k] = std::abs(p[k]);
  }
  const auto rows = hulls::cross_section(h, fixed, cfg.axis - 1, cfg.lo, cfg.hi, cfg.resolution, cfg.tol);
  if (format_of(cfg, "csv") == "csv") {
    out << "modulus,inside\n";
    for (const auto& r : rows) out << Json(r.modulus).dump() << ',' << (r.inside ? 1 : 0) << '\n';
    return kOk;
  }
  Json j = Json::array();
  for (const auto& r : rows) j.push_back({{"modulus", r.modulus}, {"inside", r.inside}});
  print(out, j);
  return kOk;
}

int match(const RunConfig& cfg, std::ostream& out) {
  const auto c = load_cfield(cfg);
  const auto target = io::parse_index(cfg.target);
  if (target.size() != c.values.dim()) throw UsageError("--target has the wrong dimension");
  const auto r = matching::match_target(c, target);
  Json j;
  j["target"] = io::to_json(target);
  j["S"] = io::axes_to_json(r.S);
  Json plan = Json::array();
  for (const auto k : r.plan.order) plan.push_back(k + 1);
  j["plan"] = std::move(plan);
  j["negatives"] = r.plan.negatives;
  j["B_target"] = io::to_json(r.B().at(target));
  j["C_target"] = io::to_json(c.at(target).value);
  j["levels"] = io::levels_to_json(r, c.box);
  print(out, j);
  return kOk;
}

int shift_verify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.input.empty()) {
    const auto seq = load_sequence(cfg);
    const auto shift = shift1d::build_unilateral(seq);
    const auto last = seq.last_index() / 2;
    std::size_t mismatches = 0;
    Json rows = Json::array();
    const bool csv = format_of(cfg, "json") == "csv";
    if (csv) out << "k,norm,norm^{1/k}\n";
    for (std::int64_t k = 1; k <= last; ++k) {
      const auto norm = shift1d::power_norm(shift, k);
      if (!(norm == seq[static_cast<std::size_t>(k)])) ++mismatches;
      const auto root = ext_root(norm, static_cast<std::uint64_t>(k));
      if (csv) {
        out << k << ',' << csv_value(norm) << ',' << csv_value(root) << '\n';
      } else {
        rows.push_back({{"k", k}, {"norm", io::to_json(norm)}, {"root", io::to_json(root)}});
      }
    }
    if (!csv) {
      Json j;
      j["mode"] = "unilateral";
      j["power_norm_mismatches"] = mismatches;
      j["rows"] = std::move(rows);
      print(out, j);
    }
    return mismatches == 0 ? kOk : kViolation;
  }
  if (cfg.field.empty()) throw UsageError("one of --input or --field is required");
  const auto field = load_field(cfg);
  const auto box = cfg.box >= 0 ? cfg.box : field.box;
  const auto sys = latticeshift::realize(field, box);
  std::size_t checked = 0, violations = 0, closed = 0, norms = 0;
  for (std::size_t k = 0; k < sys.dim(); ++k) {
    for (std::size_t l = 0; l < sys.dim(); ++l) {
      const auto r = latticeshift::check_commutation(sys, k, l);
      checked += r.checked;
      violations += r.violations.size();
      closed += r.closed_form_mismatches.size();
    }
  }
  for (const auto& m : sys.basis()) {
    if (lattice::is_nonnegative(m) && !(latticeshift::power_norms(sys, m) == field.values.at(m))) ++norms;
  }
  Json j;
  j["mode"] = "lattice";
  j["S"] = io::axes_to_json(sys.S());
  j["box"] = box;
  j["commutation_checked"] = checked;
  j["commutation_violations"] = violations;
  j["closed_form_mismatches"] = closed;
  j["power_norm_mismatches"] = norms;
  print(out, j);
  return violations + closed + norms == 0 ? kOk : kViolation;
}

int min_norm(const RunConfig& cfg, std::ostream& out) {
  const auto c = load_cfield(cfg);
  const auto j = io::parse_index(cfg.j);
  if (j.size() != c.values.dim()) throw UsageError("--j has the wrong dimension");
  if (cfg.k_max < 1) throw UsageError("--kmax must be positive");
  const auto b = matching::min_monomial_norm(c, j, cfg.k_max);
  Json o = bound_json(b);
  o["j"] = io::to_json(j);
  o["k_max"] = cfg.k_max;
  print(out, o);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral containment sets from submultiplicative norm data", "circspec"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "Relative comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for sampled validation scans");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* gen = app.add_subcommand("gen-seq", "Generate a recursive example sequence");
  gen->add_option("--kind", cfg.kind, "unbounded-ratio, inner-radius or constant")->required();
  gen->add_option("--base", cfg.base, "Base R > 1 (unbounded-ratio)");
  gen->add_option("--radius", cfg.radius, "Inner radius r in (0, 1] (inner-radius)");
  gen->add_option("--n", cfg.n, "Last index N")->required();
  gen->add_flag("--exponents", cfg.exponents, "Emit {base, exponents}");

  auto* val = app.add_subcommand("validate", "Check a sequence or field");
  val->add_option("--input", cfg.input, "Sequence or field JSON")->required();

  auto* ann = app.add_subcommand("annulus", "Smallest annulus compatible with a sequence");
  ann->add_option("--input", cfg.input, "Sequence JSON")->required();
  ann->add_option("--window", cfg.window, "Largest power k used");

  auto* cf = app.add_subcommand("cfield", "C values of a field on M ∩ box");
  cf->add_option("--field", cfg.field, "Field JSON")->required();
  cf->add_option("--box", cfg.box, "Box radius");

  auto* hm = app.add_subcommand("hull-member", "Membership of a point in a circled hull");
  hm->add_option("--field", cfg.field, "Field JSON");
  hm->add_option("--hull", cfg.hull, "Hull spec JSON");
  hm->add_option("--kind", cfg.hull_kind, "rational (C values) or polynomial (norms)")
      ->check(CLI::IsMember({"rational", "polynomial"}));
  hm->add_option("--box", cfg.box, "Box radius");
  hm->add_option("--point", cfg.point, "Coordinates \"re+imi\" or \"r∠deg\", comma separated")->required();

  auto* hs = app.add_subcommand("hull-section", "Radial in/out table of a hull");
  hs->add_option("--field", cfg.field, "Field JSON");
  hs->add_option("--hull", cfg.hull, "Hull spec JSON");
  hs->add_option("--kind", cfg.hull_kind, "rational or polynomial")->check(CLI::IsMember({"rational", "polynomial"}));
  hs->add_option("--box", cfg.box, "Box radius");
  hs->add_option("--axis", cfg.axis, "Free coordinate (1-based)");
  hs->add_option("--fixed", cfg.fixed, "Moduli of all coordinates (the free one is ignored)");
  hs->add_option("--lo", cfg.lo, "Smallest modulus");
  hs->add_option("--hi", cfg.hi, "Largest modulus");
  hs->add_option("--resolution", cfg.resolution, "Number of samples");

  auto* mt = app.add_subcommand("match", "Matching ladder for a target index");
  mt->add_option("--field", cfg.field, "Field JSON")->required();
  mt->add_option("--target", cfg.target, "Target index, e.g. \"2,-1\"")->required();
  mt->add_option("--box", cfg.box, "Box radius");

  auto* sv = app.add_subcommand("shift-verify", "Build and check weighted shift realizations");
  sv->add_option("--input", cfg.input, "Sequence JSON (one variable)");
  sv->add_option("--field", cfg.field, "Field JSON (lattice shifts)");
  sv->add_option("--box", cfg.box, "Box radius");

  auto* mn = app.add_subcommand("min-norm", "Smallest sup-norm of a monomial on a compatible spectrum");
  mn->add_option("--field", cfg.field, "Field JSON")->required();
  mn->add_option("--j", cfg.j, "Monomial index, e.g. \"1,0\"")->required();
  mn->add_option("--kmax", cfg.k_max, "Largest power");
  mn->add_option("--box", cfg.box, "Box radius");

  std::vector<const char*> argv{"circspec"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return gen_seq(cfg, out);
    if (val->parsed()) return validate(cfg, out);
    if (ann->parsed()) return annulus(cfg, out);
    if (cf->parsed()) return cfield(cfg, out);
    if (hm->parsed()) return hull_member(cfg, out);
    if (hs->parsed()) return hull_section(cfg, out);
    if (mt->parsed()) return match(cfg, out);
    if (sv->parsed()) return shift_verify(cfg, out);
    if (mn->parsed()) return min_norm(cfg, out);
  } catch (const DataViolation& v) {
    err << "error: " << v.what() << '\n';
    return kViolation;
  } catch (const sequences::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const lattice::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const hulls::HullViolation& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const latticeshift::InconsistentS& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace circspec::cli
