#include "skewprod/fixed_fraction.hpp"

#include <bit>
#include <cmath>

namespace skewprod {

FixedFraction FixedFraction::from_scaled(const BigInt& scaled, int limbs) {
  FixedFraction out(limbs);
  BigInt rest = scaled;
  if (rest < 0) {
    // Wrap into [0, 2^bits).
    const BigInt modulus = BigInt(1) << (64 * limbs);
    rest %= modulus;
    if (rest < 0) rest += modulus;
  }
  const BigInt mask = (BigInt(1) << 64) - 1;
  for (int i = 0; i < limbs; ++i) {
    out.limbs_[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(rest & mask);
    rest >>= 64;
  }
  return out;
}

bool FixedFraction::is_zero() const {
  for (auto limb : limbs_)
    if (limb != 0) return false;
  return true;
}

bool FixedFraction::at_least_half() const {
  return !limbs_.empty() && (limbs_.back() >> 63) != 0;
}

FixedFraction& FixedFraction::operator+=(const FixedFraction& other) {
  unsigned carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t a = limbs_[i];
    const std::uint64_t s = a + other.limbs_[i];
    const unsigned c1 = s < a ? 1u : 0u;
    const std::uint64_t t = s + carry;
    const unsigned c2 = t < s ? 1u : 0u;
    limbs_[i] = t;
    carry = c1 | c2;
  }
  return *this;
}

FixedFraction FixedFraction::complement() const {
  // 2^bits - x, computed as (~x) + 1 with wraparound.
  FixedFraction out(limbs());
  unsigned carry = 1;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t inv = ~limbs_[i];
    const std::uint64_t t = inv + carry;
    carry = (carry != 0 && t == 0) ? 1u : 0u;
    out.limbs_[i] = t;
  }
  return out;
}

FixedFraction FixedFraction::times(std::uint64_t k) const {
  FixedFraction out(limbs());
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(limbs_[i]) * k + carry;
    out.limbs_[i] = static_cast<std::uint64_t>(prod);
    carry = prod >> 64;
  }
  return out;
}

FixedFraction::Scaled FixedFraction::distance_to_integer() const {
  const FixedFraction y = at_least_half() ? complement() : *this;
  int top = static_cast<int>(y.limbs_.size()) - 1;
  while (top >= 0 && y.limbs_[static_cast<std::size_t>(top)] == 0) --top;
  if (top < 0) return {};
  const std::uint64_t hi = y.limbs_[static_cast<std::size_t>(top)];
  const int lz = std::countl_zero(hi);
  std::uint64_t window = hi << lz;
  if (lz > 0 && top > 0) window |= y.limbs_[static_cast<std::size_t>(top - 1)] >> (64 - lz);
  int e = 0;
  const double m = std::frexp(static_cast<double>(window), &e);
  return {m, static_cast<long>(e) + 64L * top - bits() - lz};
}

double FixedFraction::signed_value() const {
  const auto d = distance_to_integer();
  const double mag = std::ldexp(d.mantissa, static_cast<int>(d.exp2));
  return at_least_half() ? -mag : mag;
}

double FixedFraction::value() const {
  const auto d = distance_to_integer();
  const double mag = std::ldexp(d.mantissa, static_cast<int>(d.exp2));
  return at_least_half() ? 1.0 - mag : mag;
}

BigInt FixedFraction::to_bigint() const {
  BigInt out = 0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    out <<= 64;
    out += *it;
  }
  return out;
}

}  // namespace skewprod
