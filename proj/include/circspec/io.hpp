#pragma once

// JSON forms of the library types.
//
// Scalars: exact integers are JSON integers, other exact rationals are
// "p/q" strings, floats are JSON numbers and +infinity is "inf". Reading
// accepts the same forms; an integral JSON number (2 or 2.0) is exact.

#include "circspec/hulls.hpp"
#include "circspec/lattice.hpp"
#include "circspec/matching.hpp"
#include "circspec/sequences.hpp"

#include <json.hpp>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace circspec::io {

using Json = nlohmann::ordered_json;

/// Malformed input document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const ExtNonNeg& x);
ExtNonNeg ext_from_json(const Json& j);

const char* to_string(Sense s);
Sense sense_from_string(const std::string& s);
/// {"value", "exact", "sense"} plus "empty_in_window" when set.
Json to_json(const CBound& b);
CBound cbound_from_json(const Json& j);

Json to_json(const lattice::MultiIndex& i);
lattice::MultiIndex index_from_json(const Json& j, std::size_t n);

/// 1-based axis list, e.g. [1, 2].
Json axes_to_json(const lattice::AxisSet& s);
lattice::AxisSet axes_from_json(const Json& j, std::size_t n);

// Sequences: a bare array of values, {"values": [...]}, or
// {"base": R, "exponents": [...]} with null marking a_0 = 1 at position 0
// and a zero term elsewhere.
sequences::RawSequence sequence_from_json(const Json& j);
/// Bare array of values.
Json to_json(const sequences::NormSequence& seq);
/// {"base", "exponents"} for sequences with a power form.
Json power_form_to_json(const sequences::NormSequence& seq);

/// {"inner": CBound, "outer": CBound, "degenerate", "unbounded_suspected"}.
Json to_json(const sequences::Annulus& a);
sequences::Annulus annulus_from_json(const Json& j);

// Fields: {"n", "box", "default", "entries": [{"i", "a"}], "tail", "S"}.
// "tail" is "constant" (default), "clamp" or "truncated"; "S" is optional.
lattice::RawField field_from_json(const Json& j);
/// Lossless description of a validated field (clamping or truncated).
Json to_json(const lattice::NormField& f);

/// {"n", "box", "S", "S_declared", "S_exact", "values": [{"i", "C", ...}]}.
Json to_json(const lattice::CField& c);

/// Per-level dumps [{"l", "values": [{"i", "B"}]}] on M ∩ [-box, box]^n.
Json levels_to_json(const matching::MatchResult& r, std::int64_t box);

/// {"n", "kind", "S", "constraints": [{"i", "bound"}]}.
Json to_json(const hulls::HullSpec& h);
hulls::HullSpec hull_from_json(const Json& j);

/// One coordinate: "re+imi" (e.g. "2", "-0.5+1.5i", "3i") or
/// "modulus∠degrees" (also "modulus@degrees").
std::complex<double> parse_complex(const std::string& text);
/// Comma-separated coordinates.
hulls::Point parse_point(const std::string& text);
/// Comma-separated integers.
lattice::MultiIndex parse_index(const std::string& text);

Json read_json_file(const std::string& path);

}  // namespace circspec::io
