#pragma once

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "skewprod/rotation.hpp"
#include "skewprod/series.hpp"

namespace skewprod {

/// Polynomial in w with truncated-series coefficients in z, truncated
/// jointly modulo (z^(N+1), w^(D+1)).
class VerticalPoly {
 public:
  VerticalPoly() : VerticalPoly(0, 0) {}
  VerticalPoly(int z_order, int w_degree);

  /// The polynomial w.
  static VerticalPoly identity(int z_order, int w_degree);

  int z_order() const { return z_order_; }
  int w_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  const TruncatedSeries& operator[](int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
  TruncatedSeries& operator[](int j) { return coeffs_[static_cast<std::size_t>(j)]; }

  /// Value at a point, evaluating every coefficient series by Horner in z.
  std::complex<double> evaluate(std::complex<double> z, std::complex<double> w) const;
  /// Highest j with a nonzero coefficient (-1 for the zero polynomial).
  int effective_degree() const;

  VerticalPoly& operator+=(const VerticalPoly& o);
  VerticalPoly& operator-=(const VerticalPoly& o);

 private:
  int z_order_;
  std::vector<TruncatedSeries> coeffs_;
};

VerticalPoly operator+(VerticalPoly p, const VerticalPoly& q);
VerticalPoly operator-(VerticalPoly p, const VerticalPoly& q);
/// Product truncated in both variables.
VerticalPoly operator*(const VerticalPoly& p, const VerticalPoly& q);
VerticalPoly operator*(const TruncatedSeries& s, const VerticalPoly& p);

/// p(z, q(z, w))
VerticalPoly substitute(const VerticalPoly& p, const VerticalPoly& q);
/// p(lambda z, w)
VerticalPoly rotate(const VerticalPoly& p, const LambdaPowers& powers);

/// max coefficient difference divided by the largest coefficient modulus of
/// either polynomial (floored at 2^-1000).
double max_relative_difference(const VerticalPoly& p, const VerticalPoly& q);

/// F(z, w) = (lambda z, sum_j a_j(z) w^j).
///
/// `degree` is the vertical degree d of the original polynomial; entries of
/// `g` above d are tail terms produced by conjugation. The power table covers
/// lambda^0..lambda^N (and beyond, when built larger).
struct SkewGerm {
  std::shared_ptr<const RotationNumber> rotation;
  std::shared_ptr<const LambdaPowers> powers;
  int degree = 1;
  VerticalPoly g;
  /// |z| below which coefficient series are trusted when evaluated.
  double radius = 0.1;

  int z_order() const { return g.z_order(); }
  int w_degree() const { return g.w_degree(); }
  std::complex<double> lambda() const { return powers->lambda(); }
  const TruncatedSeries& a(int j) const { return g[j]; }

  /// a_0(0) = 0 and a_1(0) = 1 within tol.
  bool parabolic_fiber(double tol = 1e-12) const;
};

/// Germ with zero coefficients and a power table of size max(z_order, 1).
SkewGerm make_germ(RotationNumber rot, int degree, int z_order, int w_degree);
/// Same germ re-truncated to new (N, D_w); D_w must be at least the degree.
SkewGerm retruncate(const SkewGerm& F, int z_order, int w_degree);

struct Shift {
  TruncatedSeries phi;
};
struct Gauge {
  TruncatedSeries psi;
};
struct Bump {
  TruncatedSeries h;
  int k = 1;
};
struct WScale {
  std::complex<double> c{1.0, 0.0};
};

/// Fiber change Phi(z, w) = (z, Phi_2(z, w)).
/// Shift: w + phi(z); Gauge: w (1 + psi(z)); Bump: w + h(z) w^(k+1); WScale: c w.
using FiberChange = std::variant<Shift, Gauge, Bump, WScale>;

const char* kind_name(const FiberChange& ch);

/// Phi_2 as a vertical polynomial.
VerticalPoly fiber_polynomial(const FiberChange& ch, int z_order, int w_degree);

/// Exact inverse for Shift, Gauge and WScale; Bump has no closed-form inverse
/// of the same kind and throws MalformedInput.
FiberChange inverse(const FiberChange& ch);

/// Coefficients of the w-inverse of w -> w + h(z) w^(k+1), truncated at w^D.
/// The w^(k+1) coefficient of the result is -h(z).
VerticalPoly reversion_in_w(const TruncatedSeries& h, int k, int w_degree);

/// Phi^-1 o F o Phi truncated to the germ's (N, D_w).
SkewGerm conjugate(const SkewGerm& F, const FiberChange& ch);

/// sum_j a_j(z) phi(z)^j - phi(lambda z); vanishes iff {w = phi(z)} is invariant.
TruncatedSeries residual_invariant_curve(const SkewGerm& F, const TruncatedSeries& phi);

}  // namespace skewprod
