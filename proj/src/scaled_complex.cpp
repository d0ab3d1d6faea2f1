#include "skewprod/scaled_complex.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace skewprod {

namespace {

constexpr long kNegligibleShift = 64;
constexpr long kAbsoluteFloorExp2 = -1000;

double modulus_of(std::complex<double> m) {
  const double re = std::abs(m.real());
  const double im = std::abs(m.imag());
  const double big = std::max(re, im);
  if (big > 1e-150 && big < 1e150) return std::sqrt(re * re + im * im);
  return std::hypot(re, im);
}

}  // namespace

ScaledComplex::ScaledComplex(std::complex<double> z) : mantissa_(z), exponent_(0) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("ScaledComplex: non-finite input");
  normalize();
}

ScaledComplex ScaledComplex::from_parts(std::complex<double> mantissa, long exponent) {
  ScaledComplex out(mantissa);
  if (!out.is_zero()) out.exponent_ += exponent;
  return out;
}

void ScaledComplex::normalize() {
  const double a = modulus_of(mantissa_);
  if (a == 0.0) {
    mantissa_ = {0.0, 0.0};
    exponent_ = 0;
    return;
  }
  int e = 0;
  std::frexp(a, &e);
  const int shift = e - 1;
  if (shift != 0) {
    mantissa_ = {std::ldexp(mantissa_.real(), -shift), std::ldexp(mantissa_.imag(), -shift)};
    exponent_ += shift;
  }
}

std::complex<double> ScaledComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  const long e = exponent_;
  if (e > 2000) {
    const double inf = std::numeric_limits<double>::infinity();
    return {std::copysign(inf, mantissa_.real()), std::copysign(inf, mantissa_.imag())};
  }
  if (e < -2000) return {0.0, 0.0};
  return {std::ldexp(mantissa_.real(), static_cast<int>(e)),
          std::ldexp(mantissa_.imag(), static_cast<int>(e))};
}

double ScaledComplex::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(modulus_of(mantissa_)) + static_cast<double>(exponent_) * std::log(2.0);
}

double ScaledComplex::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log2(modulus_of(mantissa_)) + static_cast<double>(exponent_);
}

ScaledComplex ScaledComplex::modulus() const {
  if (is_zero()) return {};
  return from_raw({modulus_of(mantissa_), 0.0}, exponent_);
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const long d = exponent_ - o.exponent_;
  if (d > kNegligibleShift) return *this;
  if (d < -kNegligibleShift) return *this = o;
  if (d >= 0) {
    mantissa_ += std::complex<double>(std::ldexp(o.mantissa_.real(), static_cast<int>(-d)),
                                      std::ldexp(o.mantissa_.imag(), static_cast<int>(-d)));
  } else {
    mantissa_ = std::complex<double>(std::ldexp(mantissa_.real(), static_cast<int>(d)),
                                     std::ldexp(mantissa_.imag(), static_cast<int>(d))) +
                o.mantissa_;
    exponent_ = o.exponent_;
  }
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& o) {
  if (is_zero() || o.is_zero()) return *this = ScaledComplex();
  mantissa_ *= o.mantissa_;
  exponent_ += o.exponent_;
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& o) {
  if (o.is_zero()) throw std::domain_error("ScaledComplex: division by zero");
  if (is_zero()) return *this;
  mantissa_ /= o.mantissa_;
  exponent_ -= o.exponent_;
  normalize();
  return *this;
}

bool abs_less(const ScaledComplex& a, const ScaledComplex& b) {
  if (b.is_zero()) return false;
  if (a.is_zero()) return true;
  if (a.exponent_ != b.exponent_) return a.exponent_ < b.exponent_;
  return modulus_of(a.mantissa_) < modulus_of(b.mantissa_);
}

double relative_difference(const ScaledComplex& a, const ScaledComplex& b) {
  const ScaledComplex diff = a - b;
  if (diff.is_zero()) return 0.0;
  ScaledComplex scale = abs_less(a, b) ? b.modulus() : a.modulus();
  const ScaledComplex floor = ScaledComplex::from_parts(1.0, kAbsoluteFloorExp2);
  if (abs_less(scale, floor)) scale = floor;
  return std::exp(diff.log_abs() - scale.log_abs());
}

std::ostream& operator<<(std::ostream& os, const ScaledComplex& x) {
  return os << '(' << x.mantissa().real() << ',' << x.mantissa().imag() << ")*2^" << x.exponent();
}

}  // namespace skewprod
