#include "circspec/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace circspec::io {

namespace {

template <class T>
T require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

std::int64_t as_int(const Json& j, const char* what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw FormatError(std::string(what) + " must be an integer");
}

}  // namespace

Json to_json(const ExtNonNeg& x) {
  if (x.is_infinite()) return "inf";
  if (x.is_approx()) return x.to_double();
  const auto& q = x.rational();
  if (denominator(q) == 1 && numerator(q) <= std::numeric_limits<std::int64_t>::max())
    return numerator(q).convert_to<std::int64_t>();
  return rational_to_string(q);
}

ExtNonNeg ext_from_json(const Json& j) {
  try {
    if (j.is_number_unsigned()) return ExtNonNeg::exact(Rational(BigInt(j.get<std::uint64_t>())));
    if (j.is_number_integer()) {
      const auto v = j.get<std::int64_t>();
      if (v < 0) throw FormatError("negative value " + std::to_string(v));
      return ExtNonNeg::exact(v);
    }
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (!(d >= 0)) throw FormatError("values must be nonnegative");
      if (std::isinf(d)) return ExtNonNeg::infinity();
      if (std::floor(d) == d && d < 9e15) return ExtNonNeg::exact(static_cast<std::int64_t>(d));
      return ExtNonNeg::approx(d);
    }
    if (j.is_string()) return parse_ext(j.get<std::string>());
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("bad scalar: ") + e.what());
  }
  throw FormatError("expected a number, \"p/q\" or \"inf\", got " + j.dump());
}

const char* to_string(Sense s) {
  switch (s) {
    case Sense::exact:
      return "exact";
    case Sense::lower:
      return "lower";
    case Sense::upper:
      return "upper";
    case Sense::estimate:
      return "estimate";
  }
  return "estimate";
}

Sense sense_from_string(const std::string& s) {
  if (s == "exact") return Sense::exact;
  if (s == "lower") return Sense::lower;
  if (s == "upper") return Sense::upper;
  if (s == "estimate") return Sense::estimate;
  throw FormatError("unknown sense \"" + s + "\"");
}

Json to_json(const CBound& b) {
  Json j;
  j["value"] = to_json(b.value);
  j["exact"] = b.exact;
  j["sense"] = to_string(b.sense);
  if (b.empty_in_window) j["empty_in_window"] = true;
  return j;
}

CBound cbound_from_json(const Json& j) {
  CBound b;
  if (!j.is_object() || !j.contains("value")) throw FormatError("bound needs a \"value\"");
  b.value = ext_from_json(j.at("value"));
  b.exact = require<bool>(j, "exact");
  b.sense = j.contains("sense") ? sense_from_string(require<std::string>(j, "sense"))
                                : (b.exact ? Sense::exact : Sense::estimate);
  b.empty_in_window = j.value("empty_in_window", false);
  return b;
}

Json to_json(const lattice::MultiIndex& i) {
  Json j = Json::array();
  for (const auto x : i) j.push_back(x);
  return j;
}

lattice::MultiIndex index_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw FormatError("index must be an array");
  if (j.size() != n) throw FormatError("index " + j.dump() + " should have " + std::to_string(n) + " coordinates");
  lattice::MultiIndex i;
  for (const auto& x : j) i.push_back(as_int(x, "index coordinate"));
  return i;
}

Json axes_to_json(const lattice::AxisSet& s) {
  Json j = Json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k]) j.push_back(k + 1);
  }
  return j;
}

lattice::AxisSet axes_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw FormatError("S must be an array of axes");
  lattice::AxisSet s(n, false);
  for (const auto& x : j) {
    const auto k = as_int(x, "axis");
    if (k < 1 || k > static_cast<std::int64_t>(n)) throw FormatError("axis " + std::to_string(k) + " out of range");
    s[static_cast<std::size_t>(k - 1)] = true;
  }
  return s;
}

sequences::RawSequence sequence_from_json(const Json& j) {
  const Json* values = nullptr;
  if (j.is_array()) {
    values = &j;
  } else if (j.is_object() && j.contains("values")) {
    values = &j.at("values");
  } else if (j.is_object() && j.contains("base")) {
    const Rational base = ext_from_json(j.at("base")).rational();
    if (!j.contains("exponents") || !j.at("exponents").is_array()) throw FormatError("missing \"exponents\" array");
    std::vector<std::optional<std::int64_t>> exps;
    for (const auto& e : j.at("exponents")) {
      if (e.is_null()) {
        exps.emplace_back(exps.empty() ? std::optional<std::int64_t>(0) : std::nullopt);
      } else {
        exps.emplace_back(as_int(e, "exponent"));
      }
    }
    return sequences::RawSequence::from_exponents(base, std::move(exps));
  }
  if (!values || !values->is_array()) throw FormatError("expected an array of values or a base/exponents object");
  std::vector<ExtNonNeg> out;
  for (const auto& v : *values) out.push_back(ext_from_json(v));
  return sequences::RawSequence::from_values(std::move(out));
}

Json to_json(const sequences::NormSequence& seq) {
  Json j = Json::array();
  for (const auto& v : seq.values()) j.push_back(to_json(v));
  return j;
}

Json power_form_to_json(const sequences::NormSequence& seq) {
  const auto& pf = seq.power_form();
  if (!pf) throw std::invalid_argument("sequence has no power form");
  Json j;
  j["base"] = to_json(ExtNonNeg::exact(pf->base));
  Json e = Json::array();
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if (n < pf->exponents.size()) {
      e.push_back(pf->exponents[n]);
    } else {
      e.push_back(nullptr);
    }
  }
  j["exponents"] = std::move(e);
  return j;
}

Json to_json(const sequences::Annulus& a) {
  Json j;
  j["inner"] = to_json(a.inner);
  j["outer"] = to_json(a.outer);
  j["degenerate"] = a.degenerate;
  j["unbounded_suspected"] = a.unbounded_suspected;
  return j;
}

sequences::Annulus annulus_from_json(const Json& j) {
  sequences::Annulus a;
  a.inner = cbound_from_json(require<Json>(j, "inner"));
  a.outer = cbound_from_json(require<Json>(j, "outer"));
  a.degenerate = j.value("degenerate", false);
  a.unbounded_suspected = j.value("unbounded_suspected", false);
  return a;
}

lattice::RawField field_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("field must be an object");
  lattice::RawField raw;
  const auto n = as_int(require<Json>(j, "n"), "n");
  if (n < 1) throw FormatError("n must be positive");
  raw.n = static_cast<std::size_t>(n);
  raw.box = as_int(require<Json>(j, "box"), "box");
  if (raw.box < 0) throw FormatError("box must be nonnegative");
  if (j.contains("default")) raw.default_value = ext_from_json(j.at("default"));
  const std::string tail = j.value("tail", std::string("constant"));
  if (tail == "constant") {
    raw.tail = lattice::TailKind::constant;
  } else if (tail == "clamp") {
    raw.tail = lattice::TailKind::clamp;
  } else if (tail == "truncated") {
    raw.tail = lattice::TailKind::truncated;
  } else {
    throw FormatError("unknown tail \"" + tail + "\"");
  }
  if (j.contains("entries")) {
    if (!j.at("entries").is_array()) throw FormatError("entries must be an array");
    for (const auto& e : j.at("entries")) {
      raw.entries.emplace_back(index_from_json(require<Json>(e, "i"), raw.n), ext_from_json(require<Json>(e, "a")));
    }
  }
  if (j.contains("S")) raw.declared_S = axes_from_json(j.at("S"), raw.n);
  return raw;
}

Json to_json(const lattice::NormField& f) {
  const auto& v = f.values;
  std::int64_t box = f.box;
  for (const auto r : v.radii()) box = std::max(box, r);
  Json j;
  j["n"] = v.dim();
  j["box"] = box;
  j["default"] = 1;
  j["tail"] = v.tail() == lattice::Tail::truncated ? "truncated" : "clamp";
  Json entries = Json::array();
  for (const auto& i : v.indices_in_box(box)) {
    if (!lattice::is_nonnegative(i) || !v.covers(i)) continue;
    const auto a = v.at(i);
    if (a == ExtNonNeg::one()) continue;
    Json e;
    e["i"] = to_json(i);
    e["a"] = to_json(a);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  if (f.declared_S) j["S"] = axes_to_json(*f.declared_S);
  return j;
}

Json to_json(const lattice::CField& c) {
  Json j;
  j["n"] = c.values.dim();
  j["box"] = c.box;
  j["S"] = axes_to_json(c.s.S);
  j["S_declared"] = c.s.declared;
  j["S_exact"] = c.s.exact;
  Json values = Json::array();
  for (const auto& i : c.indices()) {
    const auto b = c.at(i);
    Json e;
    e["i"] = to_json(i);
    e["C"] = to_json(b.value);
    e["exact"] = b.exact;
    e["sense"] = to_string(b.sense);
    if (b.empty_in_window) e["empty_in_window"] = true;
    values.push_back(std::move(e));
  }
  j["values"] = std::move(values);
  return j;
}

Json levels_to_json(const matching::MatchResult& r, std::int64_t box) {
  Json out = Json::array();
  for (const auto& level : r.levels) {
    Json values = Json::array();
    for (const auto& i : level.values.indices_in_box(box)) {
      Json e;
      e["i"] = to_json(i);
      e["B"] = to_json(level.values.at(i));
      values.push_back(std::move(e));
    }
    Json l;
    l["l"] = level.level;
    l["values"] = std::move(values);
    out.push_back(std::move(l));
  }
  return out;
}

Json to_json(const hulls::HullSpec& h) {
  Json j;
  j["n"] = h.dim();
  j["kind"] = hulls::to_string(h.kind());
  j["S"] = axes_to_json(h.S());
  Json cons = Json::array();
  for (const auto& c : h.constraints()) {
    Json e;
    e["i"] = to_json(c.index);
    e["bound"] = to_json(c.bound);
    cons.push_back(std::move(e));
  }
  j["constraints"] = std::move(cons);
  return j;
}

hulls::HullSpec hull_from_json(const Json& j) {
  const auto n = as_int(require<Json>(j, "n"), "n");
  if (n < 1) throw FormatError("n must be positive");
  const auto kind_name = require<std::string>(j, "kind");
  hulls::HullKind kind;
  if (kind_name == "polynomial") {
    kind = hulls::HullKind::polynomial;
  } else if (kind_name == "rational") {
    kind = hulls::HullKind::rational;
  } else {
    throw FormatError("unknown hull kind \"" + kind_name + "\"");
  }
  const auto dim = static_cast<std::size_t>(n);
  const auto S = j.contains("S") ? axes_from_json(j.at("S"), dim) : lattice::AxisSet(dim, false);
  std::vector<hulls::Constraint> cons;
  for (const auto& e : require<Json>(j, "constraints")) {
    cons.push_back({index_from_json(require<Json>(e, "i"), dim), ext_from_json(require<Json>(e, "bound"))});
  }
  try {
    return hulls::HullSpec(dim, kind, std::move(cons), S);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

namespace {

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw FormatError("bad number \"" + text + "\"");
  }
  if (used != text.size()) throw FormatError("bad number \"" + text + "\"");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(trim(part));
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

}  // namespace

std::complex<double> parse_complex(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw FormatError("empty coordinate");
  for (const std::string sep : {"∠", "@"}) {
    const auto at = text.find(sep);
    if (at == std::string::npos) continue;
    const double modulus = parse_double(trim(text.substr(0, at)));
    const double degrees = parse_double(trim(text.substr(at + sep.size())));
    if (modulus < 0) throw FormatError("negative modulus in \"" + text + "\"");
    return std::polar(modulus, degrees * std::numbers::pi / 180.0);
  }
  if (text.back() != 'i') return {parse_double(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_double(re), parse_double(im)};
}

hulls::Point parse_point(const std::string& text) {
  hulls::Point p;
  for (const auto& part : split_commas(text)) p.push_back(parse_complex(part));
  if (p.empty()) throw FormatError("empty point");
  return p;
}

lattice::MultiIndex parse_index(const std::string& text) {
  lattice::MultiIndex i;
  for (const auto& part : split_commas(text)) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw FormatError("bad integer \"" + part + "\"");
    }
    if (used != part.size()) throw FormatError("bad integer \"" + part + "\"");
    i.push_back(v);
  }
  if (i.empty()) throw FormatError("empty index");
  return i;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace circspec::io
