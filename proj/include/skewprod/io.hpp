#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "skewprod/germ.hpp"
#include "skewprod/petals.hpp"
#include "skewprod/rotation.hpp"
#include "skewprod/scaled_complex.hpp"
#include "skewprod/series.hpp"

namespace skewprod {

using Json = nlohmann::json;

/// Parses `text` as JSON when it starts with '{' or '[', otherwise reads it
/// as a file path. Throws MalformedInput on I/O or syntax errors.
Json load_json(const std::string& file_or_inline);

/// {"kind": "surd"|"quotients"|"decimal", ...}. Integers may be JSON numbers
/// or decimal strings. Without "frac_bits", explicit quotient lists get
/// enough bits for their last convergent.
RotationNumber rotation_from_json(const Json& j);
Json rotation_to_json(const RotationNumber& rot);

/// [re, im, exp2] -> (re + i im) 2^exp2
ScaledComplex scaled_from_json(const Json& j);
/// Shortest round-trip value plus the exact mantissa/exponent pair.
Json scaled_to_json(const ScaledComplex& x);
/// The compact [re, im, exp2] triple used in germ files.
Json scaled_to_triple(const ScaledComplex& x);

Json series_to_json(const TruncatedSeries& s);
Json complex_to_json(std::complex<double> z);

struct GermFile {
  SkewGerm germ;
  /// Optional base map f(z) = lambda z + O(z^2), key "base".
  std::optional<TruncatedSeries> base;
};

/// {"rotation": ..., "degree": d, "trunc": {"z": N, "w": D_w},
///  "coeffs": [[[re, im, exp2], ...] per a_j], "radius"?: r, "base"?: [...]}
GermFile germ_from_json(const Json& j);
Json germ_to_json(const SkewGerm& F, const std::optional<TruncatedSeries>& base = std::nullopt);

Json verdict_to_json(const Verdict& v);

}  // namespace skewprod
