#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "skewprod/rotation.hpp"
#include "skewprod/scaled_complex.hpp"

namespace skewprod {

/// Formal invariant-curve coefficients of F(z, w) = (lambda z, w + z + z w):
/// phi_1 = (1 + phi_0)/(lambda - 1), phi_n = phi_{n-1}/(lambda^n - 1).
/// Entry 0 is phi_0.
std::vector<ScaledComplex> linear_example_phi(const RotationNumber& rot, std::complex<double> phi0, int m_max);

struct GreedyQuadratic {
  std::vector<int> bits;              // a_n, index 0 unused (a_0 = 0)
  std::vector<ScaledComplex> phi;     // phi_n, phi_0 = 0
  std::vector<double> numerator_modulus;  // |a_n + S_n|, index 0 unused
};

/// Builds a(z) = sum a_n z^n with a_n in {0, 1} for F = (lambda z, w + a(z) + w^2)
/// so that every numerator |a_n + S_n| is at least 1/2.
GreedyQuadratic greedy_quadratic(const RotationNumber& rot, int m_max);

/// Per-index growth e_m = (1/m) log|phi_m| for m >= 1, from exponents only.
struct GrowthProfile {
  std::vector<double> log2_magnitude;  // index m; -inf for zero coefficients
  std::vector<double> exponent;        // e_m; index 0 unused (NaN)
  std::vector<double> running_max;     // max_{1 <= j <= m} e_j
};

GrowthProfile growth_profile(const std::vector<ScaledComplex>& coeffs);

/// Columns m, a_m, log_phi, e_m, running_max, log_inv_divisor. `bits` may be
/// empty (linear example), in which case a_m is left blank.
void write_growth_csv(std::ostream& os, const RotationNumber& rot, const std::vector<ScaledComplex>& coeffs,
                      const std::vector<int>& bits = {});

}  // namespace skewprod
