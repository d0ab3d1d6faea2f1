#pragma once

#include <complex>
#include <iosfwd>

namespace skewprod {

/// Complex number stored as mantissa * 2^exponent with |mantissa| in [1, 2).
///
/// Survives the super-exponential coefficient growth of divergent
/// normalization series: |value| may range far outside double's exponent
/// range while the mantissa keeps full double precision. Zero is stored as
/// mantissa 0, exponent 0. Every operation renormalizes.
class ScaledComplex {
 public:
  ScaledComplex() = default;
  ScaledComplex(double x) : ScaledComplex(std::complex<double>(x, 0.0)) {}  // NOLINT
  ScaledComplex(std::complex<double> z);                                   // NOLINT

  static ScaledComplex from_parts(std::complex<double> mantissa, long exponent);

  std::complex<double> mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == std::complex<double>(0.0, 0.0); }

  /// Materialized value; overflows to inf / underflows to 0 outside double range.
  std::complex<double> to_complex() const;
  /// Natural log of the modulus, computed without materializing; -inf for 0.
  double log_abs() const;
  double log2_abs() const;
  /// Modulus as a ScaledComplex with zero imaginary part.
  ScaledComplex modulus() const;

  ScaledComplex conj() const { return from_raw(std::conj(mantissa_), exponent_); }
  ScaledComplex operator-() const { return from_raw(-mantissa_, exponent_); }

  ScaledComplex& operator+=(const ScaledComplex& o);
  ScaledComplex& operator-=(const ScaledComplex& o) { return *this += -o; }
  ScaledComplex& operator*=(const ScaledComplex& o);
  ScaledComplex& operator/=(const ScaledComplex& o);

  friend ScaledComplex operator+(ScaledComplex a, const ScaledComplex& b) { return a += b; }
  friend ScaledComplex operator-(ScaledComplex a, const ScaledComplex& b) { return a -= b; }
  friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
  friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }

  bool operator==(const ScaledComplex&) const = default;

  /// |a| < |b| compared through exponents first.
  friend bool abs_less(const ScaledComplex& a, const ScaledComplex& b);

 private:
  static ScaledComplex from_raw(std::complex<double> m, long e) {
    ScaledComplex out;
    out.mantissa_ = m;
    out.exponent_ = e;
    return out;
  }
  void normalize();

  std::complex<double> mantissa_{0.0, 0.0};
  long exponent_ = 0;
};

/// |a - b| / max(|a|, |b|, 2^-1000)
double relative_difference(const ScaledComplex& a, const ScaledComplex& b);

std::ostream& operator<<(std::ostream& os, const ScaledComplex& x);

}  // namespace skewprod
