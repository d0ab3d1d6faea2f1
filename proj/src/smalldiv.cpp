#include "skewprod/smalldiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "skewprod/errors.hpp"
#include "skewprod/format.hpp"

namespace skewprod {

double DivisorTable::omega_one(int m) const {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= m; ++k) best = std::min(best, d1.at(static_cast<std::size_t>(k)));
  return best;
}

DivisorTable divisor_table(const RotationNumber& rot, int m_max) {
  if (m_max < 2) throw MalformedInput("divisor_table needs m_max >= 2");
  const auto mult = frac_multiples(rot, m_max);
  DivisorTable t;
  t.m_max = m_max;
  t.frac_bits = rot.frac_bits();
  const std::size_t n = static_cast<std::size_t>(m_max) + 1;
  t.d1.assign(n, 0.0);
  t.log_d1.assign(n, -std::numeric_limits<double>::infinity());
  t.error_bound.assign(n, 0.0);
  t.omega.assign(n, std::numeric_limits<double>::quiet_NaN());
  t.log_omega.assign(n, std::numeric_limits<double>::quiet_NaN());

  const double ulp = std::ldexp(1.0, -rot.frac_bits());
  for (int p = 1; p <= m_max; ++p) {
    const auto& x = mult[static_cast<std::size_t>(p)];
    if (x.is_zero()) {
      if (p < m_max)
        throw DegenerateDivisor("degenerate divisor: " + std::to_string(p) + "*theta is an integer");
      continue;
    }
    const auto d = x.distance_to_integer();
    double value = 0.0, log_value = 0.0;
    if (d.exp2 < -30) {
      // 2 sin(pi s) = 2 pi s (1 + O(s^2)) with s < 2^-30.
      value = 2.0 * std::numbers::pi * std::ldexp(d.mantissa, static_cast<int>(std::max(d.exp2, -1100L)));
      log_value = std::log(2.0 * std::numbers::pi * d.mantissa) + static_cast<double>(d.exp2) * std::log(2.0);
    } else {
      // Argument already reduced to [0, 1/2].
      value = 2.0 * std::sin(std::numbers::pi * std::ldexp(d.mantissa, static_cast<int>(d.exp2)));
      log_value = std::log(value);
    }
    const auto i = static_cast<std::size_t>(p);
    t.d1[i] = value;
    t.log_d1[i] = log_value;
    t.error_bound[i] = 2.0 * std::numbers::pi * 4.0 * static_cast<double>(p) * ulp +
                       4.0 * std::numeric_limits<double>::epsilon() * value;
  }
  double best = std::numeric_limits<double>::infinity();
  double best_log = best;
  for (int m = 2; m <= m_max; ++m) {
    const auto k = static_cast<std::size_t>(m - 1);
    if (t.log_d1[k] < best_log) {
      best_log = t.log_d1[k];
      best = t.d1[k];
    }
    t.omega[static_cast<std::size_t>(m)] = best;
    t.log_omega[static_cast<std::size_t>(m)] = best_log;
  }
  return t;
}

double brjuno_partial_sum(const DivisorTable& table, int K) {
  if (K < 0) throw MalformedInput("brjuno_partial_sum needs K >= 0");
  if (K >= 30 || (1L << (K + 1)) > table.m_max)
    throw MalformedInput("brjuno_partial_sum needs 2^(K+1) <= m_max");
  double sum = 0.0;
  for (int k = 0; k <= K; ++k)
    sum += std::ldexp(-table.log_omega[static_cast<std::size_t>(1L << (k + 1))], -k);
  return sum;
}

double cremer_exponent(const DivisorTable& table, int m) {
  if (m < 2 || m > table.m_max) throw MalformedInput("cremer_exponent needs 2 <= m <= m_max");
  return -table.log_omega[static_cast<std::size_t>(m)] / m;
}

double cremer_running_max(const DivisorTable& table, int m) {
  if (m < 2 || m > table.m_max) throw MalformedInput("cremer_running_max needs 2 <= m <= m_max");
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 2; j <= m; ++j) best = std::max(best, cremer_exponent(table, j));
  return best;
}

void write_divisor_csv(std::ostream& os, const DivisorTable& table) {
  os << "m,dlam,omega,cremer_exponent\n";
  for (int m = 2; m <= table.m_max; ++m) {
    os << m << ',' << shortest(table.dlam(m)) << ',' << shortest(table.omega[static_cast<std::size_t>(m)])
       << ',' << shortest(cremer_exponent(table, m)) << '\n';
  }
}

}  // namespace skewprod
