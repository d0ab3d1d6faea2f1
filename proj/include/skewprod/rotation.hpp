#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/fixed_fraction.hpp"
#include "skewprod/scaled_complex.hpp"

namespace skewprod {

enum class RotationSource { Quotients, Surd, Decimal };

/// theta = (p + q * sqrt(r)) / s
struct Surd {
  BigInt p, q, r, s;
};

inline constexpr int kDefaultFracBits = 192;

/// Rotation number theta in (0, 1) of lambda = exp(2 pi i theta), held as a
/// fixed-point binary fraction so that k*theta mod 1 is exact up to k ulps.
///
/// Explicit quotient lists are completed with an all-ones tail, so the
/// represented number is [0; a_1, ..., a_n, 1, 1, ...] and is irrational.
class RotationNumber {
 public:
  static RotationNumber from_quotients(std::vector<BigInt> quotients, int frac_bits = kDefaultFracBits);
  static RotationNumber from_surd(const Surd& surd, int frac_bits = kDefaultFracBits);
  /// Parses "0.ddd..."; the result is flagged possibly rational.
  static RotationNumber from_decimal(const std::string& digits, int frac_bits = kDefaultFracBits);
  /// (sqrt 5 - 1) / 2
  static RotationNumber golden_mean(int frac_bits = kDefaultFracBits);

  RotationSource source() const { return source_; }
  /// Given list for quotient sources; continued-fraction expansion of the
  /// fixed-point value (to trustworthy depth) otherwise.
  const std::vector<BigInt>& partial_quotients() const { return quotients_; }
  const std::optional<Surd>& surd() const { return surd_; }
  const std::string& decimal() const { return decimal_; }
  /// Fractional bits actually carried (a multiple of 64, >= requested).
  int frac_bits() const { return theta_.bits(); }
  bool possibly_rational() const { return possibly_rational_; }

  const FixedFraction& theta() const { return theta_; }
  double value() const { return theta_.value(); }

  /// k*theta mod 1
  FixedFraction multiple(std::uint64_t k) const { return theta_.times(k); }
  /// lambda^m
  std::complex<double> unit_power(std::int64_t m) const;
  /// lambda^m - 1 with full relative accuracy, however small.
  ScaledComplex unit_power_minus_one(std::int64_t m) const;

  /// Denominators q_n of the convergents p_n/q_n, continuing with the
  /// all-ones tail for quotient sources, up to the first one exceeding q_max.
  std::vector<BigInt> convergent_denominators(const BigInt& q_max) const;

 private:
  RotationSource source_ = RotationSource::Quotients;
  std::vector<BigInt> quotients_;
  std::optional<Surd> surd_;
  std::string decimal_;
  bool possibly_rational_ = false;
  FixedFraction theta_;
};

/// kθ mod 1 for k = 0..k_max. Throws InsufficientPrecision when
/// k_max * 2^-frac_bits > 2^-64.
std::vector<FixedFraction> frac_multiples(const RotationNumber& rot, std::int64_t k_max);

/// lambda^m - 1 for a FixedFraction multiple x = mθ mod 1.
ScaledComplex unit_power_minus_one(const FixedFraction& x);
std::complex<double> unit_power(const FixedFraction& x);

struct LiouvilleOptions {
  int min_frac_bits = kDefaultFracBits;
  int frac_bits_ceiling = 8192;
};

/// Explicit-quotient rotation with a_n = growth(n), n = 1..depth. Fractional
/// precision is sized so that divisors up to the depth-th convergent keep 64
/// significant bits.
RotationNumber liouville_quotients(int depth, const std::function<BigInt(int)>& growth,
                                   const LiouvilleOptions& options = {});

/// Table of lambda^k and lambda^k - 1 for k = 0..n_max.
class LambdaPowers {
 public:
  LambdaPowers(const RotationNumber& rot, int n_max);

  int n_max() const { return static_cast<int>(pow_.size()) - 1; }
  std::complex<double> lambda() const { return pow_.at(1); }
  std::complex<double> pow(int k) const { return pow_.at(static_cast<std::size_t>(k)); }
  /// lambda^k - 1; throws DegenerateDivisor when it vanishes (k >= 1).
  const ScaledComplex& divisor(int k) const;
  /// lambda^k - lambda = lambda (lambda^(k-1) - 1)
  ScaledComplex divisor_lambda(int k) const;

 private:
  std::vector<std::complex<double>> pow_;
  std::vector<ScaledComplex> minus_one_;
};

}  // namespace skewprod
