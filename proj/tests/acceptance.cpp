// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "skewprod/conjugator.hpp"
#include "skewprod/cremer.hpp"
#include "skewprod/petals.hpp"
#include "skewprod/slice.hpp"
#include "skewprod/smalldiv.hpp"

using namespace skewprod;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RotationNumber liouville6() {
  LiouvilleOptions opt;
  opt.min_frac_bits = 512;
  return liouville_quotients(6, [](int n) { return BigInt(1) << (1 << n); }, opt);
}

void criterion1() {
  const int N = 32, D = 8;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto G = make_germ(RotationNumber::golden_mean(), 3, N, D);
  for (int j = 0; j <= 3; ++j)
    for (int n = 0; n <= N; ++n) G.g[j][n] = cd(u(rng), u(rng)) * std::pow(0.5, n);
  G.g[0][0] = 0.0;
  G.g[1][0] = 1.0;

  double worst = 0.0, slowest = 0.0;
  auto t0 = Clock::now();
  const auto phi = solve_invariant_curve(G);
  worst = std::max(worst, invariant_curve_residual(G, phi));
  G = conjugate(G, Shift{phi});
  worst = std::max(worst, z_dependence(G, 0));
  slowest = std::max(slowest, seconds_since(t0));

  t0 = Clock::now();
  const auto psi = solve_linear_gauge(G);
  G = conjugate(G, Gauge{psi});
  worst = std::max(worst, z_dependence(G, 1));
  slowest = std::max(slowest, seconds_since(t0));

  const int k = detect_parabolic_order(G);
  for (int m = 2; m <= k + 3; ++m) {
    t0 = Clock::now();
    const auto xi = solve_order_bump(G, m - 1);
    G = conjugate(G, Bump{xi, m - 1});
    worst = std::max(worst, z_dependence(G, m));
    slowest = std::max(slowest, seconds_since(t0));
  }
  report(1, "functional-equation residuals", worst <= 1e-8 && slowest < 1.0,
         fmt("max relative residual %.3g", worst) + fmt(", slowest stage %.3f s", slowest));
}

void criterion2() {
  auto F = make_germ(RotationNumber::golden_mean(), 3, 16, 8);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1.0;
  F.g[2][1] = 1.0;
  F.g[3][1] = 1.0;
  const auto r = normalize(F, 2, 16, 8);
  double jet_err = std::abs(r.form.jet_coefficient(2).to_complex() - 1.0);
  jet_err = std::max(jet_err, std::abs(r.form.jet_coefficient(3).to_complex()));
  jet_err = std::max(jet_err, std::abs(r.form.jet_coefficient(4).to_complex()));
  double zdep = 0.0;
  for (int m = 0; m <= 4; ++m) zdep = std::max(zdep, z_dependence(r.form.germ, m));
  double tail_err = 0.0;
  for (int m = r.form.tail_start; m <= 8; ++m)
    tail_err = std::max(tail_err, std::abs(r.form.germ.g[m][0].to_complex() - F.g[m][0].to_complex()));
  const double replay_err = max_relative_difference(replay(F, r.log).g, r.form.germ.g);
  const bool ok = jet_err <= 1e-8 && zdep <= 1e-8 && tail_err <= 1e-10 && replay_err <= 1e-8 && r.form.tail_start == 5;
  report(2, "normal form end-to-end", ok,
         fmt("jet error %.3g", jet_err) + fmt(", z-dependence below w^5 %.3g", zdep) +
             fmt(", tail constants %.3g", tail_err) + fmt(", replay %.3g", replay_err));
}

void criterion3() {
  const auto t0 = Clock::now();
  const auto golden = divisor_table(RotationNumber::golden_mean(), 1 << 21);
  const double diff = std::abs(brjuno_partial_sum(golden, 20) - brjuno_partial_sum(golden, 10));
  const auto liou = divisor_table(liouville6(), 1 << 16);
  const double b5 = brjuno_partial_sum(liou, 5);
  const double cmax = cremer_running_max(liou, 1 << 16);
  const double dt = seconds_since(t0);
  report(3, "Brjuno vs Liouville contrast", diff < 1e-2 && b5 > 1e3 && cmax > 50 && dt < 5.0,
         fmt("golden |B20 - B10| = %.4g", diff) + fmt(", Liouville B5 = %.4g", b5) +
             fmt(" (need > 1e3), Cremer max = %.4g", cmax) + fmt(" (need > 50), %.2f s", dt));
}

void criterion4() {
  const auto rot = RotationNumber::golden_mean();
  const cd phi0(0.25, -0.5);
  const auto phi = linear_example_phi(rot, phi0, 200);
  // closed form (1 + phi_0) / prod_{j <= n} (lambda^j - 1)
  double worst = 0.0;
  ScaledComplex prod(1.0);
  for (int n = 1; n <= 200; ++n) {
    prod *= unit_power_minus_one(rot.multiple(static_cast<std::uint64_t>(n)));
    worst = std::max(worst, relative_difference(phi[static_cast<std::size_t>(n)], ScaledComplex(1.0 + phi0) / prod));
  }
  const auto liou = growth_profile(linear_example_phi(liouville6(), 0.0, 200));
  const double lmax = liou.running_max[200];
  report(4, "linear example", worst <= 1e-10 && lmax > 10.0,
         fmt("recursion vs closed form %.3g", worst) + fmt(", Liouville max (1/m) log|phi_m| = %.4g (need > 10)", lmax));
}

void criterion5() {
  bool in_loop = true;
  GreedyQuadratic a, b;
  try {
    a = greedy_quadratic(liouville6(), 500);
    b = greedy_quadratic(liouville6(), 500);
  } catch (const std::logic_error&) {
    in_loop = false;
  }
  const bool same = in_loop && a.bits == b.bits;
  double min_num = INFINITY;
  if (in_loop)
    for (int n = 1; n <= 500; ++n) min_num = std::min(min_num, a.numerator_modulus[static_cast<std::size_t>(n)]);
  double best = -INFINITY;
  if (in_loop) {
    for (const auto& q : liouville6().convergent_denominators(500)) {
      if (q >= 500) break;
      const int m = static_cast<int>(q);
      best = std::max(best, a.phi[static_cast<std::size_t>(m)].log_abs() / m);
    }
  }
  report(5, "greedy construction", in_loop && same && min_num >= 0.5 && best > 10.0,
         fmt("min numerator %.4g", min_num) + std::string(same ? ", bits deterministic" : ", bits differ") +
             fmt(", best (1/q) log|phi_q| at convergents = %.4g (need > 10)", best));
}

void criterion6() {
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    const auto t0 = Clock::now();
    std::vector<cd> c(static_cast<std::size_t>(k) + 2);
    c[1] = 1.0;
    c[static_cast<std::size_t>(k) + 1] = -1.0;
    const auto fam = VerticalFamily::from_polynomial(c);
    OrbitConfig cfg;
    cfg.n_max = 10000;
    cfg.stop_at_verdict = false;
    const double target = std::pow(k, -1.0 / k);
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < k; ++j) {
      const auto o = iterate_orbit(fam, 0.0, 0.25 * attracting_directions(k)[static_cast<std::size_t>(j)], cfg);
      const double r = std::pow(10000.0, 1.0 / k) * std::abs(o.w[10000]) / target;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ok = ok && o.verdict.kind == VerdictKind::ParabolicPetal && o.verdict.index == j;
    }
    const double dt = seconds_since(t0);
    ok = ok && lo >= 0.9 && hi <= 1.1 && dt < 1.0;
    detail += fmt("k=%g ", k) + fmt("ratio [%.4f, ", lo) + fmt("%.4f] ", hi) + fmt("%.3f s; ", dt);
  }
  report(6, "parabolic decay", ok, detail);
}

void criterion7() {
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 2; ++k) {
    ParabolicLocal local;
    local.k = k;
    const auto inv = forward_invariance_check(local, 0.0, 10000, 7 + static_cast<std::uint64_t>(k));
    const auto ex = repelling_expansion_check(local, 10000, 17 + static_cast<std::uint64_t>(k));
    ok = ok && inv.samples == 10000 && inv.violations == 0 && ex.samples == 10000 && ex.violations == 0 &&
         ex.min_abs_derivative > 1.0;
    detail += fmt("k=%g: ", k) + fmt("%g invariance violations, ", inv.violations) +
              fmt("%g expansion violations, ", ex.violations) + fmt("min |g'| %.9f; ", ex.min_abs_derivative);
  }
  report(7, "petal invariance and expansion", ok, detail);
}

void criterion8() {
  const auto t0 = Clock::now();
  auto F = make_germ(RotationNumber::golden_mean(), 3, 4, 3);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1.0;
  F.g[3][1] = 0.05;
  const auto fam = VerticalFamily::from_germ(F);
  const GridSpec grid{-1.5, 0.5, -1.0, 1.0, 200};
  const auto a = fatou_slice(fam, 0.0, grid);
  const auto b = fatou_slice(fam, cd(1e-3, 0.0), grid);
  const double agree = agreement(a, b);
  auto render = [](const FatouSlice& s) {
    std::ostringstream os;
    write_ppm(os, s);
    write_slice_csv(os, s);
    return os.str();
  };
  const std::string ref = render(b);
  const bool identical = render(fatou_slice(fam, cd(1e-3, 0.0), grid, {}, 1)) == ref &&
                         render(fatou_slice(fam, cd(1e-3, 0.0), grid, {}, 7)) == ref;
  const double dt = seconds_since(t0);
  report(8, "bulging stability witness", agree >= 0.99 && identical && dt < 30.0,
         fmt("agreement %.4f", agree) + std::string(identical ? ", byte-identical across 1/7/auto threads" : ", outputs differ") +
             fmt(", %.2f s", dt));
}

void criterion9() {
  const auto sq = critical_orbit_check({0.0, 0.0, 1.0});
  const auto par = critical_orbit_check({0.0, 1.0, 1.0});
  const auto bas = critical_orbit_check({-1.0, 0.0, 1.0});
  const bool ok = sq.plausible && par.plausible && bas.plausible &&
                  sq.critical_points.at(0).verdict.kind == VerdictKind::AttractingBasin &&
                  std::abs(sq.critical_points[0].verdict.multiplier) < 1e-12 &&
                  std::abs(par.critical_points.at(0).point + 0.5) < 1e-12 &&
                  par.critical_points[0].verdict.kind == VerdictKind::ParabolicPetal &&
                  bas.critical_points.at(0).verdict.kind == VerdictKind::AttractingBasin &&
                  bas.critical_points[0].verdict.period == 2;
  report(9, "hypothesis checker", ok,
         std::string("w^2 ") + verdict_name(sq.critical_points[0].verdict.kind) + ", w+w^2 " +
             verdict_name(par.critical_points[0].verdict.kind) + ", w^2-1 " +
             verdict_name(bas.critical_points[0].verdict.kind) + fmt(" period %g", bas.critical_points[0].verdict.period));
}

void criterion10() {
  const int N = 32, D = 10;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_series = [&](double scale) {
    TruncatedSeries s(N);
    for (int n = 0; n <= N; ++n) s[n] = cd(u(rng), u(rng)) * scale * std::pow(0.7, n);
    return s;
  };
  auto F = make_germ(RotationNumber::golden_mean(), 4, N, D);
  for (int j = 0; j <= 4; ++j) F.g[j] = random_series(1.0);
  double worst = 0.0;
  for (const FiberChange& ch : {FiberChange{Shift{random_series(0.3)}}, FiberChange{Gauge{random_series(0.3)}},
                                FiberChange{WScale{cd(0.6, -0.8)}}})
    worst = std::max(worst, max_relative_difference(conjugate(conjugate(F, ch), inverse(ch)).g, F.g));
  // reversion: Phi(R(w)) = w and R(Phi(w)) = w for Phi = w + h w^(k+1)
  double rev = 0.0;
  const auto id = VerticalPoly::identity(N, D);
  for (int k = 1; k <= 3; ++k) {
    const auto h = random_series(0.5);
    const auto phi = fiber_polynomial(Bump{h, k}, N, D);
    const auto R = reversion_in_w(h, k, D);
    rev = std::max(rev, max_relative_difference(substitute(phi, R), id));
    rev = std::max(rev, max_relative_difference(substitute(R, phi), id));
  }
  report(10, "oracle round trips", worst <= 1e-9 && rev <= 1e-9,
         fmt("conjugate/inverse %.3g", worst) + fmt(", reversion %.3g", rev));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i) + 1, "exception", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
