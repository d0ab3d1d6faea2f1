#include "skewprod/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skewprod/errors.hpp"

namespace skewprod {

namespace {

void require_same_order(const TruncatedSeries& s, const TruncatedSeries& t) {
  if (s.order() != t.order())
    throw TruncationMismatch("series truncation mismatch: " + std::to_string(s.order()) + " vs " +
                             std::to_string(t.order()));
}

}  // namespace

TruncatedSeries::TruncatedSeries(int order) {
  if (order < 0) throw MalformedInput("series order must be nonnegative");
  coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries::TruncatedSeries(int order, std::vector<ScaledComplex> coeffs) : TruncatedSeries(order) {
  if (coeffs.size() > coeffs_.size())
    throw TruncationMismatch("more coefficients than the truncation order allows");
  std::copy(coeffs.begin(), coeffs.end(), coeffs_.begin());
}

TruncatedSeries TruncatedSeries::constant(int order, const ScaledComplex& c) {
  TruncatedSeries out(order);
  out[0] = c;
  return out;
}

TruncatedSeries TruncatedSeries::monomial(int order, int n, const ScaledComplex& c) {
  TruncatedSeries out(order);
  if (n <= order) out[n] = c;
  return out;
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

bool TruncatedSeries::is_constant() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

std::complex<double> TruncatedSeries::evaluate(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->to_complex();
  return acc;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_same_order(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_same_order(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const ScaledComplex& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out(*this);
  for (auto& x : out.coeffs_) x = -x;
  return out;
}

TruncatedSeries series_add(const TruncatedSeries& s, const TruncatedSeries& t) {
  TruncatedSeries out(s);
  return out += t;
}

TruncatedSeries series_sub(const TruncatedSeries& s, const TruncatedSeries& t) {
  TruncatedSeries out(s);
  return out -= t;
}

TruncatedSeries series_mul(const TruncatedSeries& s, const TruncatedSeries& t) {
  require_same_order(s, t);
  const int n = s.order();
  TruncatedSeries out(n);
  for (int i = 0; i <= n; ++i) {
    if (s[i].is_zero()) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (t[j].is_zero()) continue;
      out[i + j] += s[i] * t[j];
    }
  }
  return out;
}

TruncatedSeries series_pow(const TruncatedSeries& s, int e) {
  if (e < 0) throw MalformedInput("series_pow needs a nonnegative exponent");
  TruncatedSeries result = TruncatedSeries::constant(s.order(), 1.0);
  TruncatedSeries base = s;
  while (e > 0) {
    if (e & 1) result = series_mul(result, base);
    e >>= 1;
    if (e > 0) base = series_mul(base, base);
  }
  return result;
}

TruncatedSeries reciprocal(const TruncatedSeries& s) {
  if (s[0].is_zero()) throw std::domain_error("reciprocal of a series with zero constant term");
  const int n = s.order();
  TruncatedSeries out(n);
  const ScaledComplex inv0 = ScaledComplex(1.0) / s[0];
  out[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    ScaledComplex acc;
    for (int j = 1; j <= k; ++j) acc += s[j] * out[k - j];
    out[k] = -(acc * inv0);
  }
  return out;
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  require_same_order(f, g);
  if (!g[0].is_zero()) throw MalformedInput("compose needs g(0) = 0");
  TruncatedSeries acc(f.order());
  for (int j = f.order(); j >= 0; --j) {
    acc = series_mul(acc, g);
    acc[0] += f[j];
  }
  return acc;
}

TruncatedSeries retruncate(const TruncatedSeries& s, int order) {
  TruncatedSeries out(order);
  for (int n = 0; n <= std::min(order, s.order()); ++n) out[n] = s[n];
  return out;
}

TruncatedSeries rotate(const TruncatedSeries& s, const RotationNumber& rot, int power) {
  TruncatedSeries out(s);
  if (power == 0) return out;
  for (int n = 1; n <= s.order(); ++n)
    if (!out[n].is_zero()) out[n] *= ScaledComplex(rot.unit_power(static_cast<std::int64_t>(n) * power));
  return out;
}

TruncatedSeries rotate(const TruncatedSeries& s, const LambdaPowers& powers) {
  if (s.order() > powers.n_max()) throw TruncationMismatch("power table shorter than series order");
  TruncatedSeries out(s);
  for (int n = 1; n <= s.order(); ++n)
    if (!out[n].is_zero()) out[n] *= ScaledComplex(powers.pow(n));
  return out;
}

ScaledComplex max_modulus(const TruncatedSeries& s) {
  ScaledComplex best;
  for (const auto& c : s.coeffs()) {
    const auto m = c.modulus();
    if (abs_less(best, m)) best = m;
  }
  return best;
}

double max_relative_difference(const TruncatedSeries& s, const TruncatedSeries& t) {
  require_same_order(s, t);
  ScaledComplex scale = max_modulus(s);
  if (const auto mt = max_modulus(t); abs_less(scale, mt)) scale = mt;
  const ScaledComplex floor = ScaledComplex::from_parts(1.0, -1000);
  if (abs_less(scale, floor)) scale = floor;
  double worst = 0.0;
  for (int n = 0; n <= s.order(); ++n) {
    const ScaledComplex diff = s[n] - t[n];
    if (diff.is_zero()) continue;
    worst = std::max(worst, std::exp(diff.log_abs() - scale.log_abs()));
  }
  return worst;
}

}  // namespace skewprod
