#include <doctest.h>

#include <cmath>

#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

namespace nc = nodal::constants;
using doctest::Approx;

TEST_CASE("theta sequence spec values") {
  const auto t = nc::theta_sequence(25);
  CHECK(t[0] == 2.0);
  CHECK(t[1] == Approx(10.374).epsilon(5e-5));
  CHECK(t[2] == Approx(18.4277).epsilon(5e-6));
  CHECK(t[10] == Approx(82.4833).epsilon(5e-6));
  CHECK(t[25] == Approx(202.493).epsilon(5e-6));
  CHECK(std::isnan(t.a_seq[0]));
  CHECK_THROWS_AS(nc::theta_sequence(-1), nodal::DomainError);
  CHECK(nc::theta_sequence(0).theta.size() == 1);
}

TEST_CASE("theta invariants") {
  const auto t = nc::theta_sequence(2000);
  for (int k = 1; k <= 2000; ++k) {
    CHECK(t[k] > t[k - 1]);
    CHECK(t[k] > 2.0 + 8.0 * k);
    CHECK(t[k] < 4.0 + 8.0 * k);
    CHECK(std::floor(t[k] / 2.0) == 4.0 * k + 1.0);
    CHECK(std::abs(t[k] - (2.0 + 2.0 / t.a(k))) <= 1e-12 * t[k]);
  }
}

TEST_CASE("constant_table m = 1") {
  const auto c = nc::constant_table(1);
  CHECK(c.M[0] == Approx(std::sqrt(std::exp(1.0))).epsilon(1e-15));
  CHECK(c.D[1] == Approx(4.0 * std::sqrt(std::exp(1.0))).epsilon(1e-15));
  CHECK(c.S[0] == 0.0);
  CHECK(std::isnan(c.D[0]));
}

TEST_CASE("constant_table m = 2") {
  const auto c = nc::constant_table(2);
  CHECK(c.M[0] == Approx(2.46075).epsilon(5e-6));
  CHECK(c.S[1] == Approx(0.85076).epsilon(1e-5));
  CHECK(c.R[1] == Approx(0.67004).epsilon(5e-5));
  CHECK(c.D[2] == Approx(14.545).epsilon(1e-4));
  CHECK(c.M[1] == Approx(1.17546).epsilon(5e-5));
  CHECK(c.M[1] * c.S[1] == Approx(1.0).epsilon(1e-15));
  // D^{(2)}_1 = (theta_1 - 2) e^{2/(theta_1+2)}
  const double th = nc::theta_sequence(1)[1];
  CHECK(c.D[1] == Approx((th - 2.0) * std::exp(2.0 / (th + 2.0))).epsilon(1e-14));
  CHECK(c.D[1] == Approx(9.843).epsilon(1e-4));
}

TEST_CASE("constant_table rejects bad input") {
  CHECK_THROWS_AS(nc::constant_table(0), nodal::DomainError);
  CHECK_THROWS_AS(nc::constant_table(2, -0.5), nodal::DomainError);
  const auto t = nc::theta_sequence(3);
  CHECK_THROWS_AS(nc::constant_table(t, 6), nodal::DomainError);
}

TEST_CASE("ordering chains") {
  for (int m = 1; m <= 120; ++m) {
    const auto c = nc::constant_table(m);
    CHECK(c.S[0] == 0.0);
    double prev = 0.0;
    for (int i = 1; i <= m - 1; ++i) {
      const auto iz = static_cast<std::size_t>(i);
      CHECK(prev < c.R[iz]);
      CHECK(c.R[iz] < c.S[iz]);
      prev = c.S[iz];
    }
    CHECK(prev < 1.0);
    for (int i = 1; i <= m - 1; ++i) {
      CHECK(c.M[static_cast<std::size_t>(i - 1)] > c.M[static_cast<std::size_t>(i)]);
    }
    CHECK(c.M[static_cast<std::size_t>(m - 1)] > 1.0);
  }
}

TEST_CASE("log-space products agree with direct products") {
  // m = 60 crosses the log-space threshold; m = 50 does not.
  const auto t = nc::theta_sequence(60);
  const auto a = nc::constant_table(t, 50);
  const auto b = nc::constant_table(t, 51);
  const auto c = nc::constant_table(t, 60);
  // D^{(m)}_m and M^{(m)}_{m-1} are base constants, independent of the path.
  CHECK(c.D[60] == Approx(nc::d_base(t, 60)).epsilon(1e-15));
  CHECK(b.M[50] == Approx(nc::m_base(t, 51)).epsilon(1e-15));
  // one extra factor R_base(51)
  CHECK(b.R[1] == Approx(a.R[1] * nc::r_base(t, 51)).epsilon(1e-13));
}

TEST_CASE("product formula") {
  CHECK(nc::m0_product_formula(0) == Approx(std::sqrt(std::exp(1.0))).epsilon(1e-15));
  CHECK(nc::m0_product_formula(1) == Approx(2.46075).epsilon(5e-6));
  CHECK(nc::m0_product_formula(24) == Approx(9.10436).epsilon(5e-6));
  const auto t = nc::theta_sequence(1001);
  for (int m = 1; m <= 1000; m += 37) {
    const double table = nc::constant_table(t, m + 1).M[0];
    CHECK(std::abs(nc::m0_product_formula(t, m) - table) <= 1e-12 * table);
  }
  const auto logs = nc::log_m0_sequence(t, 1000);
  CHECK(std::exp(logs[25]) == Approx(nc::m0_product_formula(t, 25)).epsilon(1e-13));
  CHECK_THROWS_AS(nc::m0_product_formula(-1), nodal::DomainError);
}

TEST_CASE("neumann constants") {
  const auto n2 = nc::neumann_constants(2);
  CHECK(n2.Mbar[1] == Approx(1.0).epsilon(1e-14));
  CHECK(n2.Mbar[0] == Approx(2.0936).epsilon(5e-5));
  const auto c3 = nc::constant_table(3);
  const auto n3 = nc::neumann_constants(c3);
  CHECK(n3.Sbar[1] == Approx(c3.S[1] / c3.S[2]).epsilon(1e-15));
  CHECK(n3.Rbar[2] == Approx(c3.R[2] / c3.S[2]).epsilon(1e-15));
  CHECK(n3.Dbar[2] == Approx(c3.D[2] * c3.S[2]).epsilon(1e-15));
  for (int m = 2; m <= 40; ++m) {
    CHECK(std::abs(nc::neumann_constants(m).Mbar[static_cast<std::size_t>(m - 1)] - 1.0) <=
          1e-14);
  }
  CHECK_THROWS_AS(nc::neumann_constants(1), nodal::DomainError);
}

TEST_CASE("whole-plane limits") {
  CHECK(nc::whole_plane_limits(1, 0.0).rho_lim ==
        Approx(std::sqrt(std::exp(1.0))).epsilon(1e-15));
  CHECK(nc::whole_plane_limits(2, 0.0).rho_lim == Approx(2.46075).epsilon(5e-6));
  const auto w = nc::whole_plane_limits(2, 2.0);
  CHECK(w.rho_lim == Approx(std::sqrt(2.4607520)).epsilon(1e-5));
  CHECK_THROWS_AS(nc::whole_plane_limits(0, 0.0), nodal::DomainError);
}

TEST_CASE("energy limits") {
  using nc::Boundary;
  CHECK(nc::energy_limit(1, 0.0, Boundary::dirichlet) ==
        Approx(4.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(nc::energy_limit(2, 0.0, Boundary::dirichlet) == Approx(52.89).epsilon(1e-4));
  CHECK(nc::energy_limit(2, 0.0, Boundary::neumann) == Approx(25.90).epsilon(2e-4));
  CHECK(nc::energy_limit(1, 2.0, Boundary::dirichlet) ==
        Approx(8.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(nc::energy_limit(1, 0.0, Boundary::neumann), nodal::DomainError);
}

TEST_CASE("gamma_alpha_m") {
  const double se = std::sqrt(std::exp(1.0));
  CHECK(nc::gamma_alpha_m(0.0, 1) == Approx(4.0 * se).epsilon(1e-15));
  CHECK(nc::gamma_alpha_m(0.0, 2) == Approx(-14.545).epsilon(1e-4));
  CHECK(nc::gamma_alpha_m(2.0, 1) == Approx(8.0 * se).epsilon(1e-15));
  CHECK(nc::gamma_alpha_m(0.0, 3) > 0.0);
}

TEST_CASE("theta bounds") {
  const auto b1 = nc::theta_bounds_check(1);
  CHECK(b1.lower == 10.0);
  CHECK(b1.upper == 12.0);
  CHECK(b1.value == Approx(10.374).epsilon(5e-5));
  CHECK(b1.holds);
  const auto b10 = nc::theta_bounds_check(10);
  CHECK(b10.lower == 82.0);
  CHECK(b10.upper == 84.0);
  CHECK(b10.holds);
  CHECK(nc::theta_bounds_check(10000).holds);
  CHECK_THROWS_AS(nc::theta_bounds_check(0), nodal::DomainError);
}

TEST_CASE("M0 bounds") {
  const auto b1 = nc::m0_bounds_check(1);
  CHECK(b1.sandwich.lower == Approx(2.0 * std::exp(1.0 / 7.0)).epsilon(1e-14));
  CHECK(b1.sandwich.value == Approx(2.46075).epsilon(5e-6));
  CHECK(b1.sandwich.upper == Approx(2.9534).epsilon(1e-4));
  CHECK(b1.holds);
  CHECK_FALSE(b1.neumann.has_value());
  const auto b24 = nc::m0_bounds_check(24);
  CHECK(b24.sandwich.value == Approx(9.10436).epsilon(5e-6));
  CHECK(b24.holds);
  CHECK(b24.neumann.has_value());
  CHECK(b24.s_last.holds);
  CHECK(nc::growth_c1() == Approx(1.77245).epsilon(1e-5));
  CHECK(nc::growth_c2() == Approx(6.0 * std::tgamma(0.75) / std::tgamma(0.25)).epsilon(1e-14));
}

TEST_CASE("Morse formula") {
  CHECK(nc::morse_conjecture(1) == 1);
  CHECK(nc::morse_conjecture(2) == 12);
  CHECK(nc::morse_conjecture(3) == 31);
  CHECK(nc::bubble_morse(0) == 1);
  std::int64_t sum = 0;
  for (int m = 1; m <= 50; ++m) {
    CHECK(nc::bubble_morse(m) == 8 * m + 3);
    sum += nc::bubble_morse(m - 1);
    CHECK(sum == nc::morse_conjecture(m));
  }
  CHECK_THROWS_AS(nc::morse_conjecture(0), nodal::DomainError);
  CHECK_THROWS_AS(nc::bubble_morse(-1), nodal::DomainError);
}
