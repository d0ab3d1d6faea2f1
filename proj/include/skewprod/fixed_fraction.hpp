#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace skewprod {

using BigInt = boost::multiprecision::cpp_int;

/// Unsigned binary fraction in [0, 1) with a fixed number of 64-bit limbs.
///
/// Arithmetic is modulo 1, which is exactly what k*theta mod 1 needs: the
/// integer part of a multiple falls off the top limb.
class FixedFraction {
 public:
  FixedFraction() = default;
  explicit FixedFraction(int limbs) : limbs_(static_cast<std::size_t>(limbs), 0) {}

  /// floor(x * 2^bits) for an integer numerator already scaled by 2^bits.
  static FixedFraction from_scaled(const BigInt& scaled, int limbs);

  int limbs() const { return static_cast<int>(limbs_.size()); }
  int bits() const { return 64 * limbs(); }

  bool is_zero() const;
  /// x >= 1/2
  bool at_least_half() const;

  FixedFraction& operator+=(const FixedFraction& other);
  /// 1 - x (mod 1)
  FixedFraction complement() const;
  /// k * x mod 1
  FixedFraction times(std::uint64_t k) const;

  /// Distance to the nearest integer, min(x, 1 - x), as mantissa * 2^exp2
  /// with the mantissa in [0.5, 1) (or 0). Exact to 53 bits regardless of
  /// how small the distance is.
  struct Scaled {
    double mantissa = 0.0;
    long exp2 = 0;
  };
  Scaled distance_to_integer() const;

  /// Signed representative in [-1/2, 1/2) as a double (underflows to 0 below
  /// 2^-1074; use distance_to_integer when that matters).
  double signed_value() const;
  double value() const;

  BigInt to_bigint() const;

  bool operator==(const FixedFraction&) const = default;

 private:
  std::vector<std::uint64_t> limbs_;  // little-endian
};

}  // namespace skewprod
