#include <doctest.h>

#include <random>

#include "skewprod/conjugator.hpp"
#include "skewprod/errors.hpp"

using namespace skewprod;
using cd = std::complex<double>;

namespace {

double residual_of(const ChangeLog& log, const std::string& stage) {
  for (const auto& r : log.residuals)
    if (r.stage == stage) return r.residual;
  FAIL("missing stage " << stage);
  return 1.0;
}

SkewGerm seeded_cubic(std::uint64_t seed, int N, int D) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto F = make_germ(RotationNumber::golden_mean(), 3, N, D);
  for (int j = 0; j <= 3; ++j)
    for (int n = 0; n <= N; ++n) F.g[j][n] = cd(u(rng), u(rng)) * std::pow(0.5, n);
  F.g[0][0] = 0.0;
  F.g[1][0] = 1.0;
  return F;
}

}  // namespace

TEST_CASE("invariant curve of the linear example has the telescoped coefficients") {
  // F = (lambda z, w + z + z w): phi_1 = 1/(lambda - 1), phi_n = phi_{n-1}/(lambda^n - 1)
  auto F = make_germ(RotationNumber::golden_mean(), 1, 20, 2);
  F.g[0][1] = 1.0;
  F.g[1][0] = 1.0;
  F.g[1][1] = 1.0;
  const auto phi = solve_invariant_curve(F);
  ScaledComplex expect = ScaledComplex(1.0) / F.powers->divisor(1);
  CHECK(relative_difference(phi[1], expect) < 1e-14);
  for (int n = 2; n <= 20; ++n) {
    expect /= F.powers->divisor(n);
    CHECK(relative_difference(phi[n], expect) < 1e-12);
  }
  CHECK(invariant_curve_residual(F, phi) < 1e-14);
}

TEST_CASE("each stage leaves a small residual on a random cubic") {
  const auto F = seeded_cubic(2024, 24, 8);
  const auto r = normalize(F, 2, 24, 8);
  CHECK(r.form.k == 1);
  for (const auto& s : r.log.residuals) CHECK_MESSAGE(s.residual <= 1e-8, s.stage);
  CHECK(residual_of(r.log, "order_bump_w4") <= 1e-8);
  CHECK(r.log.changes.size() == 2 + 3);
}

TEST_CASE("normal form of w + w^2 + z w^2 + z w^3") {
  auto F = make_germ(RotationNumber::golden_mean(), 3, 16, 8);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1.0;
  F.g[2][1] = 1.0;
  F.g[3][1] = 1.0;
  const auto r = normalize(F, 2, 16, 8);
  CHECK(std::abs(r.form.jet_coefficient(2).to_complex() - 1.0) < 1e-12);
  CHECK(std::abs(r.form.jet_coefficient(3).to_complex()) < 1e-12);
  CHECK(std::abs(r.form.jet_coefficient(4).to_complex()) < 1e-12);
  for (int m = 0; m <= 4; ++m) CHECK(z_dependence(r.form.germ, m) < 1e-10);
  CHECK(r.form.tail_start == 5);
  CHECK(residual_of(r.log, "replay") < 1e-12);
  CHECK(residual_of(r.log, "semiconjugacy") < 1e-10);
}

TEST_CASE("order detection") {
  auto F = make_germ(RotationNumber::golden_mean(), 4, 4, 6);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1e-14;  // below the relative cut
  F.g[4][0] = 2.0;
  CHECK(detect_parabolic_order(F) == 3);
  auto L = make_germ(RotationNumber::golden_mean(), 2, 4, 4);
  L.g[1][0] = 1.0;
  L.g[2][3] = 1.0;  // only z-dependent terms
  CHECK_THROWS_AS(detect_parabolic_order(L), IdenticallyLinearFiber);
  CHECK_THROWS_AS(normalize(L, 1, 4, 4), IdenticallyLinearFiber);
}

TEST_CASE("preconditions") {
  auto F = make_germ(RotationNumber::golden_mean(), 2, 4, 4);
  F.g[1][0] = 0.5;
  F.g[2][0] = 1.0;
  CHECK_THROWS_AS(normalize(F, 1, 4, 4), MalformedInput);
  F.g[1][0] = 1.0;
  CHECK_THROWS_AS(normalize(F, 5, 4, 4), MalformedInput);
}

TEST_CASE("base linearization") {
  // f(z) = lambda z + z^2
  const auto rot = RotationNumber::golden_mean();
  auto F = make_germ(rot, 2, 12, 4);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1.0;
  F.g[2][2] = 0.5;
  TruncatedSeries f(12);
  f[1] = F.lambda();
  f[2] = 1.0;
  const auto sigma = linearize_base(f, *F.powers);
  CHECK(max_relative_difference(rotate(sigma, *F.powers), compose(f, sigma)) < 1e-12);
  CHECK(max_modulus(base_residual(f, sigma, *F.powers)).log2_abs() < -30);
  const auto r = normalize(F, 1, 12, 4, f);
  CHECK(r.log.sigma.has_value());
  CHECK(residual_of(r.log, "base_linearization") < 1e-12);
  CHECK(residual_of(r.log, "semiconjugacy") < 1e-10);
}

TEST_CASE("parabolic reduction k = 1") {
  auto F = make_germ(RotationNumber::golden_mean(), 3, 8, 6);
  F.g[1][0] = 1.0;
  F.g[2][0] = 2.0;
  F.g[3][0] = 0.7;
  const auto nf = normalize(F, 1, 8, 6).form;
  const auto red = reduce_parabolic_tail(nf, 6);
  CHECK(std::abs(red.c + 0.5) < 1e-15);
  CHECK(std::abs(red.form.jet_coefficient(2).to_complex() + 1.0) < 1e-14);
  // w^3 scales by c^2
  CHECK(std::abs(*red.form.b - 0.7 * 0.25) < 1e-14);
  CHECK(red.form.tail_start == 4);
}

TEST_CASE("parabolic reduction k = 2") {
  auto F = make_germ(RotationNumber::golden_mean(), 5, 6, 7);
  F.g[1][0] = 1.0;
  F.g[3][0] = 1.0;
  F.g[4][0] = 0.3;
  F.g[5][0] = 0.2;
  const auto nf = normalize(F, 2, 6, 7).form;
  const auto red = reduce_parabolic_tail(nf, 7);
  CHECK(std::abs(red.c - cd(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(red.form.jet_coefficient(3).to_complex() + 1.0) < 1e-14);
  CHECK(std::abs(red.form.jet_coefficient(4).to_complex()) < 1e-14);
  CHECK(std::abs(*red.form.b - 0.11) < 1e-14);
  REQUIRE(red.q.size() == 1);
  CHECK(red.q[0].first == 4);
  CHECK(std::abs(red.q[0].second.to_complex() - cd(0.0, -0.3)) < 1e-15);
  CHECK_THROWS_AS(reduce_parabolic_tail(normalize(F, 1, 6, 7).form, 7), MalformedInput);
}
