#include <doctest.h>

#include <cmath>
#include <vector>

#include "nodal/bubbles.hpp"
#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

namespace nb = nodal::bubbles;
using doctest::Approx;

TEST_CASE("regular bubble") {
  const auto z = nb::make_bubble(0, 0.0);
  CHECK(z.theta_i == 2.0);
  CHECK(z.beta_i == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(nb::bubble_profile(z, 0.0) == 0.0);
  // Z_0(r) = log(1 / (1 + r^2/8)^2)
  for (double r : {0.1, 1.0, 3.0, 50.0}) {
    CHECK(nb::bubble_profile(z, r) == Approx(-2.0 * std::log1p(r * r / 8.0)).epsilon(1e-13));
  }
}

TEST_CASE("singular bubble vanishes at sigma") {
  for (int i = 1; i <= 10; ++i) {
    for (double a : {0.0, 1.0, 2.0}) {
      const auto z = nb::make_bubble(i, a);
      CHECK(std::abs(nb::bubble_profile(z, z.sigma_i_alpha)) <= 1e-12);
      CHECK(nb::bubble_profile(z, 0.0) == -std::numeric_limits<double>::infinity());
    }
  }
  CHECK(nb::make_bubble(1, 0.0).sigma_i_alpha == Approx(7.198).epsilon(1e-4));
}

TEST_CASE("weighted bubble is a radial power of the unweighted one") {
  for (int i : {0, 1, 4}) {
    const auto z0 = nb::make_bubble(i, 0.0);
    const auto z2 = nb::make_bubble(i, 2.0);
    for (double r : {0.3, 1.0, 2.5, 9.0}) {
      CHECK(nb::bubble_profile(z2, r) == Approx(nb::bubble_profile(z0, r * r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("large index does not overflow") {
  const auto z = nb::make_bubble(2000, 0.0);
  CHECK(std::isfinite(z.theta_log_beta()));
  CHECK(std::isfinite(nb::bubble_profile(z, z.sigma_i_alpha * 1.1)));
  CHECK(nb::bubble_mass_exact(z) == Approx(4.0 * M_PI * z.theta_i).epsilon(1e-15));
}

TEST_CASE("mass and split integrals") {
  for (int i = 0; i <= 4; ++i) {
    for (double a : {0.0, 1.0}) {
      const auto z = nb::make_bubble(i, a);
      const auto m = nb::bubble_mass(z);
      CHECK(m.value == Approx(nb::bubble_mass_exact(z)).epsilon(1e-9));
      CHECK(m.error_estimate >= 0.0);
    }
  }
  const auto z = nb::make_bubble(3, 0.0);
  const auto s = nb::bubble_split_integrals(z);
  CHECK(s.inner.value == Approx(z.theta_i - 2.0).epsilon(1e-9));
  CHECK(s.outer.value == Approx(z.theta_i + 2.0).epsilon(1e-9));
  CHECK_THROWS_AS(nb::bubble_split_integrals(nb::make_bubble(3, 1.0)), nodal::DomainError);
  CHECK_THROWS_AS(nb::bubble_split_integrals(nb::make_bubble(0, 0.0)), nodal::DomainError);
}

TEST_CASE("derivative matches finite differences") {
  const auto z = nb::make_bubble(2, 1.0);
  for (double r : {0.5, 3.0, 10.0}) {
    const double h = 1e-5 * r;
    const double fd = (nb::bubble_profile(z, r + h) - nb::bubble_profile(z, r - h)) / (2 * h);
    CHECK(nb::bubble_profile_derivative(z, r) == Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("PDE residual is second order in the step") {
  const auto z = nb::make_bubble(1, 0.0);
  const std::vector<double> grid{2.0, 5.0, 7.0, 12.0};
  const double e1 = nb::bubble_pde_residual(z, grid, 0.02);
  const double e2 = nb::bubble_pde_residual(z, grid, 0.01);
  CHECK(std::log2(e1 / e2) == Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(nb::bubble_pde_residual(z, grid, 3.0), nodal::DomainError);
}

TEST_CASE("sampling") {
  const auto z = nb::make_bubble(0, 0.0);
  const auto s = nb::sample_profile(z, 0.0, 4.0, 5);
  REQUIRE(s.size() == 5);
  CHECK(s[0].r == 0.0);
  CHECK(s[4].r == 4.0);
  CHECK(s[2].exp_z == Approx(std::exp(s[2].z)).epsilon(1e-15));
  CHECK_THROWS_AS(nb::sample_profile(z, 1.0, 0.5, 5), nodal::DomainError);
}

TEST_CASE("bubble input validation") {
  CHECK_THROWS_AS(nb::make_bubble(-1, 0.0), nodal::DomainError);
  CHECK_THROWS_AS(nb::make_bubble(1, -1.0), nodal::DomainError);
  CHECK_THROWS_AS(nb::make_bubble_from_theta(1, 1.0, 0.0), nodal::DomainError);
}
