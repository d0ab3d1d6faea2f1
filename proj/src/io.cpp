#include "skewprod/io.hpp"

#include <fstream>
#include <sstream>

#include "skewprod/errors.hpp"
#include "skewprod/format.hpp"

namespace skewprod {

namespace {

BigInt big_from_json(const Json& j, const char* what) {
  try {
    if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      const bool neg = !s.empty() && s[0] == '-';
      const std::string digits = neg ? s.substr(1) : s;
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw MalformedInput("");
      BigInt v(digits);
      return neg ? BigInt(-v) : v;
    }
  } catch (const MalformedInput&) {
  }
  throw MalformedInput(std::string("field '") + what + "' must be an integer or a decimal integer string");
}

Json big_to_json(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::int64_t>::max())) return static_cast<std::int64_t>(v);
  if (v < 0 && v >= BigInt(std::numeric_limits<std::int64_t>::min())) return static_cast<std::int64_t>(v);
  return v.str();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw MalformedInput(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw MalformedInput(std::string(what) + " must be a number");
  return j.get<double>();
}

TruncatedSeries series_from_json(const Json& j, int order, const char* what) {
  if (!j.is_array()) throw MalformedInput(std::string(what) + " must be an array of [re, im, exp2] triples");
  if (j.size() > static_cast<std::size_t>(order) + 1)
    throw MalformedInput(std::string(what) + " has more coefficients than trunc.z allows");
  TruncatedSeries s(order);
  for (std::size_t n = 0; n < j.size(); ++n) s[static_cast<int>(n)] = scaled_from_json(j[n]);
  return s;
}

}  // namespace

Json load_json(const std::string& file_or_inline) {
  const auto first = file_or_inline.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && (file_or_inline[first] == '{' || file_or_inline[first] == '[')) {
    text = file_or_inline;
  } else {
    std::ifstream in(file_or_inline);
    if (!in) throw MalformedInput("cannot read '" + file_or_inline + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
}

RotationNumber rotation_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("rotation must be a JSON object");
  const Json& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw MalformedInput("rotation kind must be a string");
  const auto kind = kind_j.get<std::string>();
  std::optional<int> bits;
  if (j.contains("frac_bits")) {
    bits = int_field(j, "frac_bits");
    if (*bits < 64) throw MalformedInput("frac_bits must be at least 64");
  }
  if (kind == "surd") {
    Surd s{big_from_json(field(j, "p"), "p"), big_from_json(field(j, "q"), "q"), big_from_json(field(j, "r"), "r"),
           big_from_json(field(j, "s"), "s")};
    return RotationNumber::from_surd(s, bits.value_or(kDefaultFracBits));
  }
  if (kind == "quotients") {
    const Json& list = field(j, "quotients");
    if (!list.is_array() || list.empty()) throw MalformedInput("quotients must be a nonempty array");
    std::vector<BigInt> q;
    for (const auto& v : list) q.push_back(big_from_json(v, "quotients"));
    if (bits) return RotationNumber::from_quotients(std::move(q), *bits);
    return liouville_quotients(static_cast<int>(q.size()), [&](int n) { return q[static_cast<std::size_t>(n - 1)]; });
  }
  if (kind == "decimal") {
    const Json& d = field(j, "decimal");
    if (!d.is_string()) throw MalformedInput("decimal must be a string such as \"0.618\"");
    return RotationNumber::from_decimal(d.get<std::string>(), bits.value_or(kDefaultFracBits));
  }
  throw MalformedInput("unknown rotation kind '" + kind + "'");
}

Json rotation_to_json(const RotationNumber& rot) {
  Json j;
  switch (rot.source()) {
    case RotationSource::Surd: {
      const auto& s = *rot.surd();
      j["kind"] = "surd";
      j["p"] = big_to_json(s.p);
      j["q"] = big_to_json(s.q);
      j["r"] = big_to_json(s.r);
      j["s"] = big_to_json(s.s);
      break;
    }
    case RotationSource::Quotients: {
      j["kind"] = "quotients";
      Json list = Json::array();
      for (const auto& a : rot.partial_quotients()) list.push_back(big_to_json(a));
      j["quotients"] = list;
      break;
    }
    case RotationSource::Decimal:
      j["kind"] = "decimal";
      j["decimal"] = rot.decimal();
      break;
  }
  j["frac_bits"] = rot.frac_bits();
  return j;
}

ScaledComplex scaled_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3 || !j[2].is_number_integer())
    throw MalformedInput("coefficient must be [re, im, exp2] with integer exp2");
  const double re = number(j[0], "coefficient re");
  const double im = number(j[1], "coefficient im");
  if (!std::isfinite(re) || !std::isfinite(im)) throw MalformedInput("coefficient must be finite");
  const ScaledComplex m(std::complex<double>(re, im));
  if (m.is_zero()) return m;
  return ScaledComplex::from_parts(m.mantissa(), m.exponent() + j[2].get<long>());
}

Json scaled_to_json(const ScaledComplex& x) {
  const auto v = x.to_complex();
  Json j;
  // Strings keep nan/inf representable; shortest() round-trips.
  j["re"] = shortest(v.real());
  j["im"] = shortest(v.imag());
  j["mantissa"] = {shortest(x.mantissa().real()), shortest(x.mantissa().imag())};
  j["exp2"] = x.exponent();
  return j;
}

Json scaled_to_triple(const ScaledComplex& x) {
  return Json::array({x.mantissa().real(), x.mantissa().imag(), x.exponent()});
}

Json series_to_json(const TruncatedSeries& s) {
  Json out = Json::array();
  for (int n = 0; n <= s.order(); ++n) out.push_back(scaled_to_triple(s[n]));
  return out;
}

Json complex_to_json(std::complex<double> z) { return Json::array({shortest(z.real()), shortest(z.imag())}); }

GermFile germ_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("germ must be a JSON object");
  RotationNumber rot = rotation_from_json(field(j, "rotation"));
  const int degree = int_field(j, "degree");
  const Json& trunc = field(j, "trunc");
  const int N = int_field(trunc, "z");
  const int D = int_field(trunc, "w");
  if (N < 0 || D < degree) throw MalformedInput("trunc must satisfy z >= 0 and w >= degree");
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array() || coeffs.size() < static_cast<std::size_t>(degree) + 1 ||
      coeffs.size() > static_cast<std::size_t>(D) + 1)
    throw MalformedInput("coeffs must list the series a_0 .. a_d (at most trunc.w + 1 entries)");
  GermFile out{make_germ(std::move(rot), degree, N, D), std::nullopt};
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    out.germ.g[static_cast<int>(m)] = series_from_json(coeffs[m], N, "coeffs entry");
  if (j.contains("radius")) {
    out.germ.radius = number(j.at("radius"), "radius");
    if (!(out.germ.radius > 0.0)) throw MalformedInput("radius must be positive");
  }
  if (j.contains("base")) out.base = series_from_json(j.at("base"), N, "base");
  return out;
}

Json germ_to_json(const SkewGerm& F, const std::optional<TruncatedSeries>& base) {
  Json j;
  j["rotation"] = rotation_to_json(*F.rotation);
  j["degree"] = F.degree;
  j["trunc"] = {{"z", F.z_order()}, {"w", F.w_degree()}};
  Json coeffs = Json::array();
  for (int m = 0; m <= F.w_degree(); ++m) coeffs.push_back(series_to_json(F.g[m]));
  j["coeffs"] = coeffs;
  j["radius"] = F.radius;
  if (base) j["base"] = series_to_json(*base);
  return j;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["kind"] = verdict_name(v.kind);
  j["index"] = v.index;
  if (v.kind == VerdictKind::AttractingBasin || v.period > 0) {
    j["period"] = v.period;
    j["cycle_point"] = complex_to_json(v.cycle_point);
    j["multiplier"] = complex_to_json(v.multiplier);
  }
  return j;
}

}  // namespace skewprod
