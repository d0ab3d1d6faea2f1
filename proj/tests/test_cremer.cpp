#include <doctest.h>

#include <sstream>

#include "skewprod/cremer.hpp"

using namespace skewprod;

TEST_CASE("linear example, golden mean") {
  const auto phi = linear_example_phi(RotationNumber::golden_mean(), 0.0, 40);
  CHECK(phi[40].log_abs() == doctest::Approx(-2.2943544410183273176).epsilon(1e-11));
  const auto g = growth_profile(phi);
  CHECK(g.exponent[40] == doctest::Approx(-2.2943544410183273176 / 40).epsilon(1e-11));
  for (std::size_t m = 2; m < g.running_max.size(); ++m) CHECK(g.running_max[m] >= g.running_max[m - 1]);
}

TEST_CASE("linear example with phi_0 = -1 vanishes") {
  const auto phi = linear_example_phi(RotationNumber::golden_mean(), -1.0, 10);
  for (int n = 1; n <= 10; ++n) CHECK(phi[static_cast<std::size_t>(n)].is_zero());
}

TEST_CASE("greedy construction, golden mean") {
  const auto rot = RotationNumber::golden_mean();
  const auto a = greedy_quadratic(rot, 40);
  const std::string expect = "1111111101001111011010000011000010111011";
  std::string got;
  for (int n = 1; n <= 40; ++n) got += static_cast<char>('0' + a.bits[static_cast<std::size_t>(n)]);
  CHECK(got == expect);
  CHECK(a.phi[40].log_abs() == doctest::Approx(34.469826418442551558).epsilon(1e-10));
  for (int n = 1; n <= 40; ++n) CHECK(a.numerator_modulus[static_cast<std::size_t>(n)] >= 0.5);
  const auto b = greedy_quadratic(rot, 40);
  CHECK(a.bits == b.bits);
}

TEST_CASE("huge partial quotient shows in the growth profile") {
  const auto rot = liouville_quotients(2, [](int n) { return n == 1 ? BigInt(3) : BigInt(1) << 300; });
  const auto phi = linear_example_phi(rot, 0.0, 12);
  const auto g = growth_profile(phi);
  // phi_3 picks up 1/|lambda^3 - 1| = e^207.2
  CHECK(g.exponent[3] > 60.0);
  CHECK(g.running_max[12] >= g.exponent[3]);
}

TEST_CASE("growth CSV") {
  const auto rot = RotationNumber::golden_mean();
  const auto a = greedy_quadratic(rot, 5);
  std::ostringstream os;
  write_growth_csv(os, rot, a.phi, a.bits);
  const auto s = os.str();
  CHECK(s.rfind("m,a_m,log_phi,e_m,running_max,log_inv_divisor\n", 0) == 0);
  CHECK(s.find("\n1,1,") != std::string::npos);
}
