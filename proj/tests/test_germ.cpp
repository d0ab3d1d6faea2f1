#include <doctest.h>

#include <random>

#include "skewprod/errors.hpp"
#include "skewprod/germ.hpp"

using namespace skewprod;
using cd = std::complex<double>;

namespace {

SkewGerm random_germ(std::uint64_t seed, int degree, int N, int D) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto F = make_germ(RotationNumber::golden_mean(), degree, N, D);
  for (int j = 0; j <= degree; ++j)
    for (int n = 0; n <= N; ++n) F.g[j][n] = cd(u(rng), u(rng));
  return F;
}

TruncatedSeries random_series(std::mt19937_64& rng, int N, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s(N);
  for (int n = 0; n <= N; ++n) s[n] = cd(u(rng), u(rng)) * scale;
  return s;
}

}  // namespace

TEST_CASE("vertical polynomial substitute matches pointwise composition") {
  std::mt19937_64 rng(3);
  VerticalPoly p(8, 4), q(8, 4);
  for (int j = 0; j <= 4; ++j) {
    p[j] = random_series(rng, 8, 0.5);
    q[j] = random_series(rng, 8, 0.5);
  }
  q[0] = TruncatedSeries(8);  // keep the composition a germ at w = 0
  const auto pq = substitute(p, q);
  // compare low-order part at a tiny point where truncation error is negligible
  const cd z(1e-3, 5e-4), w(-2e-3, 1e-3);
  CHECK(std::abs(pq.evaluate(z, w) - p.evaluate(z, q.evaluate(z, w))) < 1e-12);
}

TEST_CASE("WScale by -1 maps w + w^2 to w - w^2") {
  auto F = make_germ(RotationNumber::golden_mean(), 2, 4, 4);
  F.g[1][0] = 1.0;
  F.g[2][0] = 1.0;
  const auto G = conjugate(F, WScale{-1.0});
  CHECK(G.g[1][0].to_complex() == cd(1.0, 0.0));
  CHECK(G.g[2][0].to_complex() == cd(-1.0, 0.0));
}

TEST_CASE("reversion in w") {
  // inverse of w + c w^2 is w - c w^2 + 2 c^2 w^3 - 5 c^3 w^4 + ...
  const cd c(0.3, -0.4);
  const auto h = TruncatedSeries::constant(2, c);
  const auto R = reversion_in_w(h, 1, 5);
  CHECK(std::abs(R[1][0].to_complex() - 1.0) < 1e-15);
  CHECK(std::abs(R[2][0].to_complex() + c) < 1e-15);
  CHECK(std::abs(R[3][0].to_complex() - 2.0 * c * c) < 1e-15);
  CHECK(std::abs(R[4][0].to_complex() + 5.0 * c * c * c) < 1e-15);
  CHECK(std::abs(R[5][0].to_complex() - 14.0 * c * c * c * c) < 1e-14);
}

TEST_CASE("conjugation by a change and its inverse is the identity") {
  std::mt19937_64 rng(5);
  const auto F = random_germ(21, 3, 10, 8);
  const std::vector<FiberChange> changes = {Shift{random_series(rng, 10, 0.3)},
                                            Gauge{random_series(rng, 10, 0.3)}, WScale{cd(0.8, 0.6)}};
  for (const auto& ch : changes) {
    const auto back = conjugate(conjugate(F, ch), inverse(ch));
    CHECK_MESSAGE(max_relative_difference(F.g, back.g) < 1e-12, kind_name(ch));
  }
  CHECK_THROWS_AS(inverse(Bump{TruncatedSeries(10), 1}), MalformedInput);
}

TEST_CASE("invariant-curve residual vanishes on a hand solution") {
  // F = (lambda z, w + z): phi(lambda z) = phi(z) + z has phi = z / (lambda - 1)
  auto F = make_germ(RotationNumber::golden_mean(), 1, 6, 2);
  F.g[0][1] = 1.0;
  F.g[1][0] = 1.0;
  TruncatedSeries phi(6);
  phi[1] = ScaledComplex(1.0) / F.powers->divisor(1);
  CHECK(max_modulus(residual_invariant_curve(F, phi)).log2_abs() < -50);
}

TEST_CASE("germ truncation checks") {
  CHECK_THROWS_AS(make_germ(RotationNumber::golden_mean(), 3, 4, 2), MalformedInput);
  const auto F = random_germ(1, 2, 4, 4);
  const auto G = retruncate(F, 8, 6);
  CHECK(G.z_order() == 8);
  CHECK(G.w_degree() == 6);
  CHECK(G.g[2][4] == F.g[2][4]);
  CHECK(G.g[2][8].is_zero());
}
