#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "skewprod/conjugator.hpp"
#include "skewprod/cremer.hpp"
#include "skewprod/petals.hpp"
#include "skewprod/smalldiv.hpp"

using namespace skewprod;
using cd = std::complex<double>;

namespace {

RotationNumber liouville6() {
  LiouvilleOptions opt;
  opt.min_frac_bits = 512;
  return liouville_quotients(6, [](int n) { return BigInt(1) << (1 << n); }, opt);
}

// running max of e_m for the greedy example at the golden mean, m <= 1000
constexpr double kGoldenGreedyBound = 1.0442700;

}  // namespace

TEST_CASE("divisors agree with repeated multiplication") {
  for (const auto& rot : {RotationNumber::golden_mean(), RotationNumber::from_surd({0, 1, 2, 2}),
                          RotationNumber::from_quotients({3, 1, 4, 1, 5, 2, 6})}) {
    const auto t = divisor_table(rot, 1001);
    const cd lambda = std::polar(1.0, 2.0 * std::numbers::pi * rot.value());
    cd p = 1.0;
    for (int k = 1; k <= 1000; ++k) {
      p *= lambda;
      CHECK(std::abs(std::abs(p - 1.0) - t.d1[static_cast<std::size_t>(k)]) <= 1e-10 + k * 1e-15);
    }
  }
}

TEST_CASE("Brjuno partial sums grow with K when every omega is below one") {
  // theta = [0; 10, 1, 1, ...]: |lambda - 1| is already below one
  const auto t = divisor_table(RotationNumber::from_quotients({10}), 1 << 14);
  REQUIRE(t.omega[2] < 1.0);
  for (int K = 1; K <= 12; ++K) CHECK(brjuno_partial_sum(t, K) >= brjuno_partial_sum(t, K - 1));
}

TEST_CASE("scaled arithmetic matches double arithmetic in range") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-240, 240);
  for (int i = 0; i < 2000; ++i) {
    const cd a = std::ldexp(1.0, e(rng)) * cd(u(rng), u(rng));
    const cd b = std::ldexp(1.0, e(rng)) * cd(u(rng), u(rng));
    const ScaledComplex sa(a), sb(b);
    auto close = [](const ScaledComplex& s, cd ref) { return std::abs(s.to_complex() - ref) <= 1e-14 * std::abs(ref); };
    CHECK(close(sa * sb, a * b));
    CHECK(close(sa / sb, a / b));
    // sums can cancel; measure against the larger operand
    CHECK(std::abs((sa + sb).to_complex() - (a + b)) <= 1e-15 * std::max(std::abs(a), std::abs(b)));
  }
}

TEST_CASE("z-independent germs need no changes") {
  auto F = make_germ(RotationNumber::golden_mean(), 3, 12, 6);
  F.g[1][0] = 1.0;
  F.g[2][0] = cd(0.3, 0.2);
  F.g[3][0] = -0.7;
  const auto r = normalize(F, 2, 12, 6);
  for (const auto& ch : r.log.changes) {
    if (const auto* s = std::get_if<Shift>(&ch)) CHECK(s->phi.is_zero());
    if (const auto* g = std::get_if<Gauge>(&ch)) CHECK(g->psi.is_zero());
    if (const auto* b = std::get_if<Bump>(&ch)) CHECK(b->h.is_zero());
  }
  CHECK(max_relative_difference(r.form.germ.g, retruncate(F, 12, 6).g) == 0.0);
}

TEST_CASE("replay reproduces the normal form on random germs") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    auto F = make_germ(RotationNumber::golden_mean(), 4, 32, 10);
    for (int j = 0; j <= 4; ++j)
      for (int n = 0; n <= 32; ++n) F.g[j][n] = cd(u(rng), u(rng));
    F.g[0][0] = 0.0;
    F.g[1][0] = 1.0;
    const auto r = normalize(F, 3, 32, 10);
    CHECK(max_relative_difference(replay(F, r.log).g, r.form.germ.g) <= 1e-8);
  }
}

TEST_CASE("invariant-curve growth stays bounded at the golden mean") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto F = make_germ(RotationNumber::golden_mean(), 3, 32, 8);
  for (int j = 0; j <= 3; ++j)
    for (int n = 0; n <= 32; ++n) F.g[j][n] = cd(u(rng), u(rng));
  F.g[0][0] = 0.0;
  F.g[1][0] = 1.0;
  const auto phi = solve_invariant_curve(F);
  double half = -INFINITY, full = -INFINITY;
  for (int p = 1; p <= 32; ++p) {
    full = std::max(full, phi[p].log_abs() / p);
    if (p == 16) half = full;
  }
  CHECK(full < 1.0);
  CHECK(full - half < 0.25);
}

TEST_CASE("linear example obeys the telescoped identity") {
  for (const auto& rot : {RotationNumber::golden_mean(), liouville6()}) {
    const cd phi0(0.5, 0.5);
    const auto g = growth_profile(linear_example_phi(rot, phi0, 300));
    double acc = 0.0;
    for (int m = 1; m <= 300; ++m) {
      acc += -rot.unit_power_minus_one(m).log_abs();
      const double rhs = (acc + std::log(std::abs(1.0 + phi0))) / m;
      CHECK(std::abs(g.exponent[static_cast<std::size_t>(m)] - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("greedy growth at the golden mean matches the recorded bound") {
  const auto g = growth_profile(greedy_quadratic(RotationNumber::golden_mean(), 1000).phi);
  CHECK(g.running_max[1000] == doctest::Approx(kGoldenGreedyBound).epsilon(1e-6));
}

TEST_CASE("parabolic decay bracket holds for every n past 1000") {
  OrbitConfig cfg;
  cfg.n_max = 10000;
  cfg.stop_at_verdict = false;
  for (int k = 1; k <= 3; ++k) {
    std::vector<cd> c(static_cast<std::size_t>(k) + 2);
    c[1] = 1.0;
    c[static_cast<std::size_t>(k) + 1] = -1.0;
    const auto o = iterate_orbit(VerticalFamily::from_polynomial(c), 0.0, 0.25, cfg);
    const double target = std::pow(k, -1.0 / k);
    double lo = INFINITY, hi = -INFINITY;
    for (int n = 1000; n <= 10000; ++n) {
      const double s = std::pow(n, 1.0 / k) * std::abs(o.w[static_cast<std::size_t>(n)]);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    CHECK(lo >= 0.9 * target);
    CHECK(hi <= 1.1 * target);
  }
}

TEST_SUITE("liouville") {
  TEST_CASE("Liouville greedy growth exceeds the golden bound tenfold") {
    const auto g = growth_profile(greedy_quadratic(liouville6(), 1000).phi);
    INFO("Liouville running max " << g.running_max[1000]);
    CHECK(g.running_max[1000] >= 10.0 * kGoldenGreedyBound);
  }
}
