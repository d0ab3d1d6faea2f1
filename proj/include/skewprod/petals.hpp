#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/conjugator.hpp"
#include "skewprod/germ.hpp"

namespace skewprod {

/// Local model near a parabolic point after the parabolic reduction:
///   g_z(w) = w - w^(k+1) + b w^(2k+1) + sum_{m >= 2k+2} beta_m(z) w^m.
struct ParabolicLocal {
  int k = 1;
  std::complex<double> b{0.0, 0.0};
  std::vector<TruncatedSeries> tail;  // beta_m for m = 2k+2, 2k+3, ...
  double rho = 0.1;
  double eta = 0.25;
  std::complex<double> lambda{1.0, 0.0};

  int tail_start() const { return 2 * k + 2; }
  /// Coefficients of g_z in w (index = power of w).
  std::vector<std::complex<double>> fiber(std::complex<double> z) const;
};

/// Takes k, b and the tail from a reduced normal form.
ParabolicLocal parabolic_local(const ReducedForm& reduced, double rho = 0.1, double eta = 0.25);

/// The k directions v with v^k = 1, attracting for w - w^(k+1).
std::vector<std::complex<double>> attracting_directions(int k);

/// Index j of the attracting petal containing w, if any. Petal j is the set
/// of w in the sector |arg w - 2 pi j/k| < pi/k whose u = 1/(k w^k) satisfies
/// Re u > R - eta |Im u|, R = 1/(k rho^k). Throws MalformedInput for w = 0.
std::optional<int> in_attracting_petal(std::complex<double> w, int k, double rho, double eta);

/// Repelling petal j: sector centred on (2j+1) pi/k with Re u < -R.
std::optional<int> in_repelling_petal(std::complex<double> w, int k, double rho);

struct InvarianceReport {
  int samples = 0;
  int violations = 0;
  /// min over samples of Re u' + eta |Im u'| - R at the image (negative = outside)
  double worst_margin = 0.0;
};

/// Samples (z, w) with |z| < z_band and w in an attracting petal, applies F
/// once and counts images that leave the petals.
InvarianceReport forward_invariance_check(const ParabolicLocal& local, double z_band, int samples,
                                          std::uint64_t seed);

struct ExpansionReport {
  int samples = 0;
  int violations = 0;
  double min_abs_derivative = 0.0;
};

/// Samples repelling-petal points at z = 0 and checks |g'(zeta)| > 1.
ExpansionReport repelling_expansion_check(const ParabolicLocal& local, int samples, std::uint64_t seed);

/// Vertical maps g_z(w) of a skew product over an irrational rotation,
/// prepared for fast numeric iteration.
class VerticalFamily {
 public:
  static VerticalFamily from_germ(const SkewGerm& F);
  static VerticalFamily from_local(const ParabolicLocal& local);
  /// z-independent family g(w) = sum_j coeffs[j] w^j.
  static VerticalFamily from_polynomial(std::vector<std::complex<double>> coeffs);

  bool z_independent() const { return z_independent_; }
  double radius() const { return radius_; }
  int w_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficients of g_z in w.
  std::vector<std::complex<double>> fiber(std::complex<double> z) const;
  /// lambda^n z0 (from the fixed-point rotation when available).
  std::complex<double> z_at(std::complex<double> z0, std::int64_t n) const;

  /// Parabolic data of w = 0 on the fiber z = 0, when g_0(0) = 0 and g_0'(0) = 1.
  struct Parabolic {
    int k = 1;
    std::vector<std::complex<double>> directions;
  };
  const std::optional<Parabolic>& parabolic() const { return parabolic_; }

 private:
  void detect_parabolic();

  std::vector<std::vector<std::complex<double>>> coeffs_;  // [j][n]
  std::shared_ptr<const RotationNumber> rotation_;
  std::complex<double> lambda_{1.0, 0.0};
  double radius_ = 0.1;
  bool z_independent_ = true;
  std::optional<Parabolic> parabolic_;
};

enum class VerdictKind { Undecided = 0, Escape = 1, AttractingBasin = 2, ParabolicPetal = 3 };

const char* verdict_name(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Undecided;
  /// Petal direction for ParabolicPetal; cycle id for AttractingBasin
  /// (assigned by the caller that knows all cycles; 0 otherwise).
  int index = 0;
  int period = 0;
  std::complex<double> cycle_point{0.0, 0.0};
  std::complex<double> multiplier{0.0, 0.0};
};

struct OrbitConfig {
  int n_max = 10000;
  double escape_radius = 1e6;
  double arg_tol = 0.2;
  double cycle_tol = 1e-9;
  int window = 50;
  int period_cap = 64;
  /// |w| below which convergence toward an attracting direction counts.
  double petal_radius = 0.1;
  /// Keep iterating after the first verdict (escape still stops).
  bool stop_at_verdict = true;
};

struct OrbitRecord {
  std::vector<std::complex<double>> z;
  std::vector<std::complex<double>> w;
  std::vector<double> deriv_log;  // log|dg_{z_n}/dw (w_n)|, one per step taken
  Verdict verdict;
  int n_stop = 0;
  std::string stop_reason;
};

/// Iterates (z, w) -> (lambda z, g_z(w)) and classifies the orbit.
OrbitRecord iterate_orbit(const VerticalFamily& family, std::complex<double> z0, std::complex<double> w0,
                          const OrbitConfig& config = {});
OrbitRecord iterate_orbit(const SkewGerm& F, std::complex<double> z0, std::complex<double> w0,
                          const OrbitConfig& config = {});
OrbitRecord iterate_orbit(const ParabolicLocal& local, std::complex<double> z0, std::complex<double> w0,
                          const OrbitConfig& config = {});

/// Partial sums S_n = sum_{i<n} log|dg(w_i)|, n = 1..steps.
std::vector<double> vertical_derivative_sum(const OrbitRecord& orbit);

struct CriticalPointReport {
  std::complex<double> point;
  bool root_converged = false;
  Verdict verdict;
  int n_stop = 0;
};

struct HypothesisReport {
  std::vector<CriticalPointReport> critical_points;
  bool plausible = false;
};

/// Finds the critical points of g_0 (companion-matrix eigenvalues of g_0',
/// Newton-polished) and classifies each critical orbit.
HypothesisReport critical_orbit_check(const std::vector<std::complex<double>>& g0, const OrbitConfig& config = {});

/// Per-step fiber coefficients along the base orbit z_n = lambda^n z0. Shared
/// by every grid point of a slice, so it is built once.
class StepCoefficients {
 public:
  StepCoefficients(const VerticalFamily& family, std::complex<double> z0, int n_max);
  const std::vector<std::complex<double>>& at(int n) const {
    return steps_.size() == 1 ? steps_.front() : steps_[static_cast<std::size_t>(n)];
  }
  std::complex<double> z(int n) const;

 private:
  std::vector<std::vector<std::complex<double>>> steps_;
  std::vector<std::complex<double>> z_;
};

/// Core classifier behind iterate_orbit; `record` may be null.
Verdict classify_orbit(const VerticalFamily& family, const StepCoefficients& steps, std::complex<double> w0,
                       const OrbitConfig& config, int* n_stop, OrbitRecord* record);

}  // namespace skewprod
