#include "skewprod/cremer.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "skewprod/errors.hpp"
#include "skewprod/format.hpp"

namespace skewprod {

std::vector<ScaledComplex> linear_example_phi(const RotationNumber& rot, std::complex<double> phi0, int m_max) {
  if (m_max < 1) throw MalformedInput("linear_example_phi needs m_max >= 1");
  const LambdaPowers powers(rot, m_max);
  std::vector<ScaledComplex> phi(static_cast<std::size_t>(m_max) + 1);
  phi[0] = ScaledComplex(phi0);
  phi[1] = ScaledComplex(1.0 + phi0) / powers.divisor(1);
  for (int n = 2; n <= m_max; ++n) phi[static_cast<std::size_t>(n)] = phi[static_cast<std::size_t>(n - 1)] / powers.divisor(n);
  return phi;
}

GreedyQuadratic greedy_quadratic(const RotationNumber& rot, int m_max) {
  if (m_max < 1) throw MalformedInput("greedy_quadratic needs m_max >= 1");
  const LambdaPowers powers(rot, m_max);
  const auto size = static_cast<std::size_t>(m_max) + 1;
  GreedyQuadratic out;
  out.bits.assign(size, 0);
  out.phi.assign(size, ScaledComplex());
  out.numerator_modulus.assign(size, std::numeric_limits<double>::quiet_NaN());
  out.bits[1] = 1;
  out.numerator_modulus[1] = 1.0;
  out.phi[1] = ScaledComplex(1.0) / powers.divisor(1);
  const ScaledComplex half(0.5);
  for (int n = 2; n <= m_max; ++n) {
    ScaledComplex s;
    for (int j = 1; j < n; ++j) s += out.phi[static_cast<std::size_t>(j)] * out.phi[static_cast<std::size_t>(n - j)];
    const ScaledComplex with_one = s + ScaledComplex(1.0);
    // Take the larger numerator; ties go to 0.
    const bool pick_one = abs_less(s, with_one);
    const ScaledComplex numer = pick_one ? with_one : s;
    if (abs_less(numer.modulus(), half))
      throw std::logic_error("greedy_quadratic: both numerators below 1/2");
    const auto i = static_cast<std::size_t>(n);
    out.bits[i] = pick_one ? 1 : 0;
    out.numerator_modulus[i] = std::exp(numer.log_abs());
    out.phi[i] = numer / powers.divisor(n);
  }
  return out;
}

GrowthProfile growth_profile(const std::vector<ScaledComplex>& coeffs) {
  if (coeffs.empty()) throw MalformedInput("growth_profile needs a nonempty coefficient list");
  GrowthProfile g;
  const std::size_t n = coeffs.size();
  g.log2_magnitude.resize(n);
  g.exponent.assign(n, std::numeric_limits<double>::quiet_NaN());
  g.running_max.assign(n, std::numeric_limits<double>::quiet_NaN());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < n; ++m) {
    g.log2_magnitude[m] = coeffs[m].log2_abs();
    if (m == 0) continue;
    const double e = coeffs[m].log_abs() / static_cast<double>(m);
    g.exponent[m] = e;
    best = std::max(best, e);
    g.running_max[m] = best;
  }
  return g;
}

void write_growth_csv(std::ostream& os, const RotationNumber& rot, const std::vector<ScaledComplex>& coeffs,
                      const std::vector<int>& bits) {
  const GrowthProfile g = growth_profile(coeffs);
  const int m_max = static_cast<int>(coeffs.size()) - 1;
  const LambdaPowers powers(rot, std::max(m_max, 1));
  os << "m,a_m,log_phi,e_m,running_max,log_inv_divisor\n";
  for (int m = 1; m <= m_max; ++m) {
    const auto i = static_cast<std::size_t>(m);
    os << m << ',';
    if (i < bits.size()) os << bits[i];
    os << ',' << shortest(coeffs[i].log_abs()) << ',' << shortest(g.exponent[i]) << ','
       << shortest(g.running_max[i]) << ',' << shortest(-powers.divisor(m).log_abs()) << '\n';
  }
}

}  // namespace skewprod
