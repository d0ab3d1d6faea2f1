#pragma once

#include <iosfwd>
#include <vector>

#include "skewprod/rotation.hpp"

namespace skewprod {

/// Small divisors of lambda = exp(2 pi i theta) up to m_max.
///
/// Both flavours are kept: d1[p] = |lambda^p - 1| and dlam[k] = |lambda^k - lambda|
/// (which equals d1[k-1]); omega[m] is the running minimum of dlam over
/// 2..m. Logs are carried separately so that divisors below double's range
/// still have meaningful log(1/omega).
struct DivisorTable {
  int m_max = 0;
  int frac_bits = 0;
  std::vector<double> d1;           // index p in [0, m_max]; d1[0] = 0
  std::vector<double> log_d1;
  std::vector<double> error_bound;  // absolute error estimate for d1[p]
  std::vector<double> omega;        // index m in [2, m_max]; lower entries unused
  std::vector<double> log_omega;

  double dlam(int k) const { return d1.at(static_cast<std::size_t>(k - 1)); }
  double log_dlam(int k) const { return log_d1.at(static_cast<std::size_t>(k - 1)); }
  /// min_{1 <= k <= m} |lambda^k - 1|, the variant used in the linear Cremer example.
  double omega_one(int m) const;
};

/// Throws DegenerateDivisor when k*theta mod 1 is exactly zero for some
/// 1 <= k < m_max (those are the multiples omega depends on).
DivisorTable divisor_table(const RotationNumber& rot, int m_max);

/// sum_{k=0}^{K} 2^-k log(1/omega(2^(k+1)))
double brjuno_partial_sum(const DivisorTable& table, int K);

/// (1/m) log(1/omega(m))
double cremer_exponent(const DivisorTable& table, int m);
/// max_{2 <= j <= m} cremer_exponent(table, j)
double cremer_running_max(const DivisorTable& table, int m);

/// Columns m, dlam, omega, cremer_exponent for m = 2..m_max.
void write_divisor_csv(std::ostream& os, const DivisorTable& table);

}  // namespace skewprod
