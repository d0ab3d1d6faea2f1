#pragma once

#include <complex>
#include <span>
#include <vector>

#include "skewprod/rotation.hpp"
#include "skewprod/scaled_complex.hpp"

namespace skewprod {

/// Power series c_0 + c_1 z + ... + c_N z^N, truncated modulo z^(N+1).
class TruncatedSeries {
 public:
  TruncatedSeries() : TruncatedSeries(0) {}
  explicit TruncatedSeries(int order);
  /// Coefficients beyond `coeffs.size()` are zero; more than order+1 is an error.
  TruncatedSeries(int order, std::vector<ScaledComplex> coeffs);

  static TruncatedSeries constant(int order, const ScaledComplex& c);
  static TruncatedSeries monomial(int order, int n, const ScaledComplex& c = 1.0);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const ScaledComplex& operator[](int n) const { return coeffs_[static_cast<std::size_t>(n)]; }
  ScaledComplex& operator[](int n) { return coeffs_[static_cast<std::size_t>(n)]; }
  std::span<const ScaledComplex> coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// True when every coefficient of z^n, n >= 1, is zero.
  bool is_constant() const;
  std::complex<double> evaluate(std::complex<double> z) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const ScaledComplex& c);

  TruncatedSeries operator-() const;

 private:
  std::vector<ScaledComplex> coeffs_;
};

TruncatedSeries series_add(const TruncatedSeries& s, const TruncatedSeries& t);
TruncatedSeries series_sub(const TruncatedSeries& s, const TruncatedSeries& t);
TruncatedSeries series_mul(const TruncatedSeries& s, const TruncatedSeries& t);
TruncatedSeries series_pow(const TruncatedSeries& s, int e);
/// 1/s; needs s(0) != 0.
TruncatedSeries reciprocal(const TruncatedSeries& s);
/// f(g(z)); needs g(0) = 0.
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g);
/// Zero-pads or drops coefficients to the new order.
TruncatedSeries retruncate(const TruncatedSeries& s, int order);

/// s(lambda^power z): coefficient n times lambda^(n*power).
TruncatedSeries rotate(const TruncatedSeries& s, const RotationNumber& rot, int power);
/// s(lambda z) using a precomputed power table.
TruncatedSeries rotate(const TruncatedSeries& s, const LambdaPowers& powers);

inline TruncatedSeries operator+(const TruncatedSeries& s, const TruncatedSeries& t) { return series_add(s, t); }
inline TruncatedSeries operator-(const TruncatedSeries& s, const TruncatedSeries& t) { return series_sub(s, t); }
inline TruncatedSeries operator*(const TruncatedSeries& s, const TruncatedSeries& t) { return series_mul(s, t); }
inline TruncatedSeries operator*(TruncatedSeries s, const ScaledComplex& c) { return s *= c; }
inline TruncatedSeries operator*(const ScaledComplex& c, TruncatedSeries s) { return s *= c; }

/// Largest modulus among the coefficients (zero for the zero series).
ScaledComplex max_modulus(const TruncatedSeries& s);

/// max_n |s_n - t_n| divided by the largest coefficient modulus of either
/// series (floored at 2^-1000).
double max_relative_difference(const TruncatedSeries& s, const TruncatedSeries& t);

}  // namespace skewprod
