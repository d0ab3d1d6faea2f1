#include "skewprod/rotation.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "skewprod/errors.hpp"

namespace skewprod {

namespace {

constexpr int kGuardBits = 64;
constexpr int kMaxExpansionDepth = 64;

int limbs_for(int frac_bits) {
  if (frac_bits < 64) throw MalformedInput("frac_bits must be at least 64");
  return (frac_bits + 63) / 64;
}

BigInt golden_tail(int work_bits) {
  const BigInt one = BigInt(1) << work_bits;
  const BigInt root5 = boost::multiprecision::sqrt(BigInt(5) << (2 * work_bits));
  return (root5 - one) >> 1;
}

// Continued-fraction expansion of scaled / 2^work_bits. Stops once the
// convergent denominators exceed the trustworthy range.
std::vector<BigInt> expand(const BigInt& scaled, int work_bits, bool exact) {
  std::vector<BigInt> out;
  BigInt num = BigInt(1) << work_bits;
  BigInt den = scaled;
  BigInt q_prev = 0, q = 1;
  const BigInt q_limit = BigInt(1) << (work_bits / 2 - 8);
  while (den != 0 && (exact || static_cast<int>(out.size()) < kMaxExpansionDepth)) {
    const BigInt a = num / den;
    const BigInt r = num - a * den;
    const BigInt q_next = a * q + q_prev;
    if (!exact && q_next > q_limit) break;
    out.push_back(a);
    q_prev = q;
    q = q_next;
    num = den;
    den = r;
  }
  return out;
}

}  // namespace

RotationNumber RotationNumber::from_quotients(std::vector<BigInt> quotients, int frac_bits) {
  const int limbs = limbs_for(frac_bits);
  const int work = 64 * limbs + kGuardBits;
  for (const auto& a : quotients)
    if (a < 1) throw MalformedInput("partial quotients must be positive integers");
  BigInt x = golden_tail(work);
  const BigInt one = BigInt(1) << work;
  const BigInt one_sq = BigInt(1) << (2 * work);
  for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) x = one_sq / (*it * one + x);
  RotationNumber out;
  out.source_ = RotationSource::Quotients;
  out.quotients_ = std::move(quotients);
  out.theta_ = FixedFraction::from_scaled(x >> kGuardBits, limbs);
  if (out.theta_.is_zero()) throw InsufficientPrecision("theta underflows the fixed-point precision");
  return out;
}

RotationNumber RotationNumber::from_surd(const Surd& surd, int frac_bits) {
  if (surd.s == 0) throw MalformedInput("surd denominator s must be nonzero");
  if (surd.q == 0 || surd.r <= 0) throw MalformedInput("surd needs q != 0 and r > 0");
  const BigInt root_r = boost::multiprecision::sqrt(surd.r);
  if (root_r * root_r == surd.r) throw MalformedInput("surd radicand r is a perfect square");
  const int limbs = limbs_for(frac_bits);
  const int work = 64 * limbs + kGuardBits;
  const BigInt root = boost::multiprecision::sqrt(BigInt(surd.r << (2 * work)));
  BigInt num = surd.p * (BigInt(1) << work) + surd.q * root;
  BigInt den = surd.s;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num <= 0 || num >= den * (BigInt(1) << work)) throw MalformedInput("surd value must lie in (0, 1)");
  const BigInt scaled = num / den;
  RotationNumber out;
  out.source_ = RotationSource::Surd;
  out.surd_ = surd;
  out.quotients_ = expand(scaled, work, false);
  out.theta_ = FixedFraction::from_scaled(scaled >> kGuardBits, limbs);
  return out;
}

RotationNumber RotationNumber::from_decimal(const std::string& digits, int frac_bits) {
  std::size_t pos = 0;
  if (digits.rfind("0.", 0) == 0)
    pos = 2;
  else if (digits.rfind(".", 0) == 0)
    pos = 1;
  else
    throw MalformedInput("decimal rotation must look like 0.ddd: " + digits);
  const std::string frac = digits.substr(pos);
  if (frac.empty()) throw MalformedInput("decimal rotation has no digits");
  BigInt numer = 0, denom = 1;
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw MalformedInput("bad decimal digit in " + digits);
    numer = numer * 10 + (c - '0');
    denom *= 10;
  }
  if (numer == 0) throw MalformedInput("decimal rotation must lie in (0, 1)");
  const int limbs = limbs_for(frac_bits);
  const int work = 64 * limbs + kGuardBits;
  RotationNumber out;
  out.source_ = RotationSource::Decimal;
  out.decimal_ = digits;
  out.possibly_rational_ = true;
  // Exact expansion of the rational numer/denom.
  {
    BigInt num = denom, den = numer;
    while (den != 0) {
      const BigInt a = num / den;
      out.quotients_.push_back(a);
      const BigInt r = num - a * den;
      num = den;
      den = r;
    }
  }
  out.theta_ = FixedFraction::from_scaled(((numer << work) / denom) >> kGuardBits, limbs);
  return out;
}

RotationNumber RotationNumber::golden_mean(int frac_bits) {
  return from_surd(Surd{-1, 1, 5, 2}, frac_bits);
}

std::complex<double> RotationNumber::unit_power(std::int64_t m) const {
  const auto z = skewprod::unit_power(multiple(static_cast<std::uint64_t>(m < 0 ? -m : m)));
  return m < 0 ? std::conj(z) : z;
}

ScaledComplex RotationNumber::unit_power_minus_one(std::int64_t m) const {
  const auto d = skewprod::unit_power_minus_one(multiple(static_cast<std::uint64_t>(m < 0 ? -m : m)));
  return m < 0 ? d.conj() : d;
}

std::vector<BigInt> RotationNumber::convergent_denominators(const BigInt& q_max) const {
  std::vector<BigInt> out;
  BigInt q_prev = 0, q = 1;
  for (std::size_t n = 0;; ++n) {
    BigInt a;
    if (n < quotients_.size())
      a = quotients_[n];
    else if (source_ == RotationSource::Quotients)
      a = 1;
    else
      break;
    const BigInt q_next = a * q + q_prev;
    if (q_next > q_max) break;
    out.push_back(q_next);
    q_prev = q;
    q = q_next;
  }
  return out;
}

std::vector<FixedFraction> frac_multiples(const RotationNumber& rot, std::int64_t k_max) {
  if (k_max < 0) throw MalformedInput("k_max must be nonnegative");
  // k_max * 2^-bits <= 2^-64
  const BigInt lhs = BigInt(k_max);
  if (lhs > (BigInt(1) << (rot.frac_bits() - 64)))
    throw InsufficientPrecision("frac_bits too small for requested multiples");
  std::vector<FixedFraction> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  FixedFraction acc(rot.theta().limbs());
  out.push_back(acc);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    acc += rot.theta();
    out.push_back(acc);
  }
  return out;
}

std::complex<double> unit_power(const FixedFraction& x) {
  const double s = x.signed_value();
  const double a = 2.0 * std::numbers::pi * s;
  return {std::cos(a), std::sin(a)};
}

ScaledComplex unit_power_minus_one(const FixedFraction& x) {
  if (x.is_zero()) return {};
  // lambda^m - 1 = 2 i sin(pi s) exp(i pi s), s the signed representative.
  const auto d = x.distance_to_integer();
  const double sign = x.at_least_half() ? -1.0 : 1.0;
  ScaledComplex mag;
  if (d.exp2 < -30) {
    const double pis = std::numbers::pi * std::ldexp(d.mantissa, static_cast<int>(std::max(d.exp2, -1000L)));
    mag = ScaledComplex::from_parts(2.0 * std::numbers::pi * d.mantissa * (1.0 - pis * pis / 6.0), d.exp2);
  } else {
    const double s = std::ldexp(d.mantissa, static_cast<int>(d.exp2));
    mag = ScaledComplex(2.0 * std::sin(std::numbers::pi * s));
  }
  const double s = sign * std::ldexp(d.mantissa, static_cast<int>(std::max(d.exp2, -1100L)));
  const std::complex<double> phase(-std::sin(std::numbers::pi * s), std::cos(std::numbers::pi * s));
  return mag * ScaledComplex(sign * phase);
}

RotationNumber liouville_quotients(int depth, const std::function<BigInt(int)>& growth,
                                   const LiouvilleOptions& options) {
  if (depth < 1) throw MalformedInput("liouville depth must be >= 1");
  std::vector<BigInt> quotients;
  BigInt q_prev = 0, q = 1;
  for (int n = 1; n <= depth; ++n) {
    BigInt a = growth(n);
    if (a < 1) throw MalformedInput("growth(n) must be >= 1");
    const BigInt q_next = a * q + q_prev;
    q_prev = q;
    q = q_next;
    quotients.push_back(std::move(a));
  }
  const BigInt q_after = q + q_prev;  // all-ones tail
  const int needed = 128 + 2 * static_cast<int>(boost::multiprecision::msb(q_after) + 1);
  int bits = std::max(options.min_frac_bits, needed);
  bits = (bits + 63) / 64 * 64;
  if (bits > options.frac_bits_ceiling)
    throw InsufficientPrecision("liouville rotation needs " + std::to_string(bits) + " fractional bits");
  return RotationNumber::from_quotients(std::move(quotients), bits);
}

LambdaPowers::LambdaPowers(const RotationNumber& rot, int n_max) {
  if (n_max < 1) throw MalformedInput("LambdaPowers needs n_max >= 1");
  const auto mult = frac_multiples(rot, n_max);
  pow_.reserve(mult.size());
  minus_one_.reserve(mult.size());
  for (const auto& x : mult) {
    pow_.push_back(unit_power(x));
    minus_one_.push_back(unit_power_minus_one(x));
  }
}

const ScaledComplex& LambdaPowers::divisor(int k) const {
  const auto& d = minus_one_.at(static_cast<std::size_t>(k));
  if (k >= 1 && d.is_zero())
    throw DegenerateDivisor("lambda^" + std::to_string(k) + " - 1 vanishes (rational rotation)");
  return d;
}

ScaledComplex LambdaPowers::divisor_lambda(int k) const {
  return ScaledComplex(lambda()) * divisor(k - 1);
}

}  // namespace skewprod
