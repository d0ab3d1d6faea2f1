#include "skewprod/petals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "skewprod/errors.hpp"

namespace skewprod {

namespace {

using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double petal_R(int k, double rho) { return 1.0 / (k * std::pow(rho, k)); }

int sector_index(cd w, int k, double offset) {
  // Nearest angle offset + 2 pi j / k.
  const double a = std::arg(w) - offset;
  long j = std::lround(a * k / kTwoPi);
  j %= k;
  if (j < 0) j += k;
  return static_cast<int>(j);
}

cd sample_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double t = kTwoPi * unit(rng);
  return std::polar(r, t);
}

void horner(const std::vector<cd>& c, cd w, cd& value, cd& deriv) {
  value = 0.0;
  deriv = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    deriv = deriv * w + value;
    value = value * w + *it;
  }
}

double wrapped_angle(double a) {
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - std::numbers::pi;
}

}  // namespace

std::vector<cd> ParabolicLocal::fiber(cd z) const {
  const int top = tail_start() + static_cast<int>(tail.size()) - 1;
  std::vector<cd> c(static_cast<std::size_t>(std::max(top, 2 * k + 1)) + 1, 0.0);
  c[1] = 1.0;
  c[static_cast<std::size_t>(k + 1)] -= 1.0;
  c[static_cast<std::size_t>(2 * k + 1)] += b;
  for (std::size_t i = 0; i < tail.size(); ++i) c[static_cast<std::size_t>(tail_start()) + i] += tail[i].evaluate(z);
  return c;
}

ParabolicLocal parabolic_local(const ReducedForm& reduced, double rho, double eta) {
  ParabolicLocal local;
  local.k = reduced.form.k;
  local.b = reduced.form.b.value_or(0.0);
  local.tail = reduced.form.tail;
  local.rho = rho;
  local.eta = eta;
  if (reduced.form.germ.powers) local.lambda = reduced.form.germ.lambda();
  return local;
}

std::vector<cd> attracting_directions(int k) {
  if (k < 1) throw MalformedInput("attracting_directions needs k >= 1");
  std::vector<cd> out;
  for (int j = 0; j < k; ++j) out.push_back(std::polar(1.0, kTwoPi * j / k));
  // Keep the exact values on the axes.
  for (auto& v : out) {
    if (std::abs(v.real()) < 1e-15) v.real(0.0);
    if (std::abs(v.imag()) < 1e-15) v.imag(0.0);
  }
  return out;
}

std::optional<int> in_attracting_petal(cd w, int k, double rho, double eta) {
  if (w == cd(0.0, 0.0)) throw MalformedInput("in_attracting_petal: w = 0 is the fixed point");
  if (k < 1 || rho <= 0.0 || eta < 0.0 || eta >= 1.0) throw MalformedInput("in_attracting_petal: bad k, rho or eta");
  const cd u = 1.0 / (static_cast<double>(k) * std::pow(w, k));
  if (u.real() > petal_R(k, rho) - eta * std::abs(u.imag())) return sector_index(w, k, 0.0);
  return std::nullopt;
}

std::optional<int> in_repelling_petal(cd w, int k, double rho) {
  if (w == cd(0.0, 0.0)) throw MalformedInput("in_repelling_petal: w = 0 is the fixed point");
  const cd u = 1.0 / (static_cast<double>(k) * std::pow(w, k));
  if (u.real() < -petal_R(k, rho)) return sector_index(w, k, std::numbers::pi / k);
  return std::nullopt;
}

InvarianceReport forward_invariance_check(const ParabolicLocal& local, double z_band, int samples,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int k = local.k;
  const double R = petal_R(k, local.rho);
  const double w_bound = local.rho * std::pow(1.0 + local.eta * local.eta, 0.5 / k);
  InvarianceReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  while (report.samples < samples) {
    const cd z = sample_disk(rng, z_band);
    const cd w = sample_disk(rng, w_bound);
    if (w == cd(0.0, 0.0) || !in_attracting_petal(w, k, local.rho, local.eta)) continue;
    ++report.samples;
    cd image, deriv;
    horner(local.fiber(z), w, image, deriv);
    if (image == cd(0.0, 0.0)) continue;
    const cd u = 1.0 / (static_cast<double>(k) * std::pow(image, k));
    const double margin = u.real() + local.eta * std::abs(u.imag()) - R;
    report.worst_margin = std::min(report.worst_margin, margin);
    if (!in_attracting_petal(image, k, local.rho, local.eta)) ++report.violations;
  }
  return report;
}

ExpansionReport repelling_expansion_check(const ParabolicLocal& local, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto coeffs = local.fiber(0.0);
  ExpansionReport report;
  report.min_abs_derivative = std::numeric_limits<double>::infinity();
  while (report.samples < samples) {
    const cd zeta = sample_disk(rng, local.rho);
    if (zeta == cd(0.0, 0.0) || !in_repelling_petal(zeta, local.k, local.rho)) continue;
    ++report.samples;
    cd value, deriv;
    horner(coeffs, zeta, value, deriv);
    const double a = std::abs(deriv);
    report.min_abs_derivative = std::min(report.min_abs_derivative, a);
    if (!(a > 1.0)) ++report.violations;
  }
  return report;
}

VerticalFamily VerticalFamily::from_germ(const SkewGerm& F) {
  VerticalFamily fam;
  const int d = F.g.effective_degree();
  fam.coeffs_.resize(static_cast<std::size_t>(std::max(d, 0)) + 1);
  fam.z_independent_ = true;
  for (int j = 0; j <= std::max(d, 0); ++j) {
    auto& row = fam.coeffs_[static_cast<std::size_t>(j)];
    for (int n = 0; n <= F.z_order(); ++n) row.push_back(F.g[j][n].to_complex());
    if (!F.g[j].is_constant()) fam.z_independent_ = false;
  }
  fam.rotation_ = F.rotation;
  fam.lambda_ = F.lambda();
  fam.radius_ = F.radius;
  fam.detect_parabolic();
  return fam;
}

VerticalFamily VerticalFamily::from_local(const ParabolicLocal& local) {
  VerticalFamily fam;
  const auto c0 = local.fiber(0.0);
  fam.coeffs_.resize(c0.size());
  fam.z_independent_ = true;
  for (std::size_t j = 0; j < c0.size(); ++j) fam.coeffs_[j].push_back(c0[j]);
  for (std::size_t i = 0; i < local.tail.size(); ++i) {
    const auto& s = local.tail[i];
    auto& row = fam.coeffs_[static_cast<std::size_t>(local.tail_start()) + i];
    for (int n = 1; n <= s.order(); ++n) row.push_back(s[n].to_complex());
    if (!s.is_constant()) fam.z_independent_ = false;
  }
  fam.lambda_ = local.lambda;
  fam.radius_ = local.rho;
  fam.detect_parabolic();
  return fam;
}

VerticalFamily VerticalFamily::from_polynomial(std::vector<cd> coeffs) {
  if (coeffs.empty()) throw MalformedInput("from_polynomial needs coefficients");
  VerticalFamily fam;
  for (const auto& c : coeffs) fam.coeffs_.push_back({c});
  fam.z_independent_ = true;
  fam.radius_ = std::numeric_limits<double>::infinity();
  fam.detect_parabolic();
  return fam;
}

std::vector<cd> VerticalFamily::fiber(cd z) const {
  std::vector<cd> out(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const auto& row = coeffs_[j];
    cd acc = 0.0;
    for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * z + *it;
    out[j] = acc;
  }
  return out;
}

cd VerticalFamily::z_at(cd z0, std::int64_t n) const {
  if (z0 == cd(0.0, 0.0)) return z0;
  if (rotation_) return rotation_->unit_power(n) * z0;
  return std::polar(1.0, std::arg(lambda_) * static_cast<double>(n)) * z0;
}

void VerticalFamily::detect_parabolic() {
  parabolic_.reset();
  const auto c = fiber(0.0);
  if (c.size() < 3 || std::abs(c[0]) > 1e-12 || std::abs(c[1] - 1.0) > 1e-12) return;
  double biggest = 0.0;
  for (std::size_t j = 2; j < c.size(); ++j) biggest = std::max(biggest, std::abs(c[j]));
  if (biggest == 0.0) return;
  for (std::size_t j = 2; j < c.size(); ++j) {
    if (std::abs(c[j]) < 1e-10 * biggest) continue;
    Parabolic p;
    p.k = static_cast<int>(j) - 1;
    // a v^k must be negative real: v^k = -conj(a)/|a|.
    const cd target = -std::conj(c[j]) / std::abs(c[j]);
    const cd v0 = std::polar(1.0, std::arg(target) / p.k);
    for (const auto& r : attracting_directions(p.k)) p.directions.push_back(v0 * r);
    parabolic_ = std::move(p);
    return;
  }
}

const char* verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Undecided: return "Undecided";
    case VerdictKind::Escape: return "Escape";
    case VerdictKind::AttractingBasin: return "AttractingBasin";
    case VerdictKind::ParabolicPetal: return "ParabolicPetal";
  }
  return "?";
}

StepCoefficients::StepCoefficients(const VerticalFamily& family, cd z0, int n_max) {
  if (std::abs(z0) >= family.radius())
    throw MalformedInput("|z0| must be below the germ's radius of validity");
  if (family.z_independent() || z0 == cd(0.0, 0.0)) {
    steps_.push_back(family.fiber(z0));
    z_.push_back(z0);
    return;
  }
  const int count = std::max(n_max, 1) + 1;
  steps_.reserve(static_cast<std::size_t>(count));
  z_.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const cd z = family.z_at(z0, n);
    z_.push_back(z);
    steps_.push_back(family.fiber(z));
  }
}

cd StepCoefficients::z(int n) const {
  if (z_.size() == 1) return z_.front();
  return z_[static_cast<std::size_t>(n)];
}

Verdict classify_orbit(const VerticalFamily& family, const StepCoefficients& steps, cd w0,
                       const OrbitConfig& config, int* n_stop, OrbitRecord* record) {
  const int cap = std::max(config.period_cap, 1);
  const auto& par = family.parabolic();
  // Ring buffers of the last cap+1 points and derivatives.
  std::vector<cd> hist(static_cast<std::size_t>(cap) + 1);
  std::vector<cd> dhist(static_cast<std::size_t>(cap) + 1);
  const auto slot = [&](int n) { return static_cast<std::size_t>(n % (cap + 1)); };

  Verdict verdict;
  bool decided = false;
  int stop = 0;
  std::string reason;

  int par_dir = -1, par_count = 0;
  // Brent-style period search, then confirmation over the window.
  cd tortoise = w0;
  int power = 1, lam = 0;
  int cyc_p = 0, cyc_count = 0;

  cd w = w0;
  for (int n = 0;; ++n) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > config.escape_radius) {
      if (!decided) {
        verdict.kind = VerdictKind::Escape;
        stop = n;
        reason = "escape";
      }
      break;
    }
    hist[slot(n)] = w;
    if (n > 0 && !decided) {
      const cd prev = hist[slot(n - 1)];
      // Parabolic petal: shrinking modulus close to an attracting direction.
      if (par && std::abs(w) < config.petal_radius && std::abs(w) < std::abs(prev) && w != cd(0.0, 0.0)) {
        int dir = -1;
        for (std::size_t j = 0; j < par->directions.size(); ++j) {
          if (std::abs(wrapped_angle(std::arg(w / par->directions[j]))) < config.arg_tol) {
            dir = static_cast<int>(j);
            break;
          }
        }
        if (dir >= 0 && dir == par_dir) {
          ++par_count;
        } else {
          par_dir = dir;
          par_count = dir >= 0 ? 1 : 0;
        }
      } else {
        par_dir = -1;
        par_count = 0;
      }
      if (par_count >= config.window) {
        verdict.kind = VerdictKind::ParabolicPetal;
        verdict.index = par_dir;
        decided = true;
        stop = n;
        reason = "parabolic petal";
      }

      const double tol = config.cycle_tol * std::max(1.0, std::abs(w));
      if (!decided) {
        if (cyc_p > 0) {
          if (std::abs(w - hist[slot(n - cyc_p)]) < tol) {
            ++cyc_count;
          } else {
            cyc_p = 0;
            cyc_count = 0;
          }
        } else {
          ++lam;
          if (std::abs(w - tortoise) < tol && lam <= n) {
            cyc_p = lam;
            cyc_count = 1;
          }
          if (lam == power) {
            tortoise = w;
            power = std::min(2 * power, cap);
            lam = 0;
          }
        }
        if (cyc_p > 0 && cyc_count >= config.window) {
          cd mult = 1.0;
          for (int i = 1; i <= cyc_p; ++i) mult *= dhist[slot(n - i)];
          verdict.period = cyc_p;
          verdict.multiplier = mult;
          // Canonical representative: lexicographically smallest point.
          cd best = w;
          for (int i = 1; i < cyc_p; ++i) {
            const cd c = hist[slot(n - i)];
            if (c.real() < best.real() || (c.real() == best.real() && c.imag() < best.imag())) best = c;
          }
          verdict.cycle_point = best;
          decided = true;
          stop = n;
          if (std::abs(mult) < 1.0) {
            verdict.kind = VerdictKind::AttractingBasin;
            reason = "attracting cycle";
          } else {
            verdict.kind = VerdictKind::Undecided;
            reason = "non-attracting cycle";
            break;
          }
        }
      }
      if (decided && config.stop_at_verdict) break;
    }
    if (n >= config.n_max) {
      if (!decided) {
        stop = n;
        reason = "budget";
      }
      break;
    }
    cd value, deriv;
    horner(steps.at(n), w, value, deriv);
    dhist[slot(n)] = deriv;
    if (record) {
      record->z.push_back(steps.z(n));
      record->w.push_back(w);
      record->deriv_log.push_back(std::log(std::abs(deriv)));
    }
    w = value;
  }
  if (record) {
    record->w.push_back(w);
    record->z.push_back(steps.z(static_cast<int>(record->z.size())));
    record->verdict = verdict;
    record->n_stop = stop;
    record->stop_reason = reason;
  }
  if (n_stop) *n_stop = stop;
  return verdict;
}

OrbitRecord iterate_orbit(const VerticalFamily& family, cd z0, cd w0, const OrbitConfig& config) {
  if (config.n_max < 1) throw MalformedInput("iterate_orbit needs n_max >= 1");
  const StepCoefficients steps(family, z0, config.n_max);
  OrbitRecord record;
  classify_orbit(family, steps, w0, config, nullptr, &record);
  return record;
}

OrbitRecord iterate_orbit(const SkewGerm& F, cd z0, cd w0, const OrbitConfig& config) {
  return iterate_orbit(VerticalFamily::from_germ(F), z0, w0, config);
}

OrbitRecord iterate_orbit(const ParabolicLocal& local, cd z0, cd w0, const OrbitConfig& config) {
  return iterate_orbit(VerticalFamily::from_local(local), z0, w0, config);
}

std::vector<double> vertical_derivative_sum(const OrbitRecord& orbit) {
  if (orbit.deriv_log.empty()) throw MalformedInput("vertical_derivative_sum needs at least one step");
  std::vector<double> sums;
  sums.reserve(orbit.deriv_log.size());
  double acc = 0.0;
  for (double d : orbit.deriv_log) {
    acc += d;
    sums.push_back(acc);
  }
  return sums;
}

HypothesisReport critical_orbit_check(const std::vector<cd>& g0, const OrbitConfig& config) {
  int deg = static_cast<int>(g0.size()) - 1;
  while (deg > 0 && g0[static_cast<std::size_t>(deg)] == cd(0.0, 0.0)) --deg;
  if (deg < 2) throw MalformedInput("critical_orbit_check needs a polynomial of degree >= 2");
  // g0' = sum_{j>=1} j g_j w^(j-1), degree deg - 1.
  std::vector<cd> dg(static_cast<std::size_t>(deg));
  for (int j = 1; j <= deg; ++j) dg[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) * g0[static_cast<std::size_t>(j)];
  const int m = deg - 1;
  std::vector<cd> roots;
  if (m == 1) {
    roots.push_back(-dg[0] / dg[1]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -dg[static_cast<std::size_t>(i)] / dg[static_cast<std::size_t>(m)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (int i = 0; i < m; ++i) roots.push_back(solver.eigenvalues()(i));
  }
  // Second derivative for Newton polishing.
  std::vector<cd> ddg(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) ddg[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) * dg[static_cast<std::size_t>(j)];

  const VerticalFamily family = VerticalFamily::from_polynomial(std::vector<cd>(g0.begin(), g0.begin() + deg + 1));
  double scale = 0.0;
  for (const auto& c : dg) scale = std::max(scale, std::abs(c));

  HypothesisReport report;
  report.plausible = true;
  for (cd r : roots) {
    cd v, dv;
    for (int it = 0; it < 50; ++it) {
      horner(dg, r, v, dv);
      if (v == cd(0.0, 0.0) || dv == cd(0.0, 0.0)) break;
      const cd step = v / dv;
      r -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    horner(dg, r, v, dv);
    CriticalPointReport cp;
    cp.point = r;
    cp.root_converged = std::abs(v) <= 1e-10 * scale * std::max(1.0, std::pow(std::abs(r), m));
    const auto orbit = iterate_orbit(family, 0.0, r, config);
    cp.verdict = orbit.verdict;
    cp.n_stop = orbit.n_stop;
    if (!cp.root_converged || (cp.verdict.kind != VerdictKind::AttractingBasin &&
                               cp.verdict.kind != VerdictKind::ParabolicPetal))
      report.plausible = false;
    report.critical_points.push_back(cp);
  }
  return report;
}

}  // namespace skewprod
