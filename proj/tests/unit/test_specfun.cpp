#include <doctest.h>

#include <cmath>
#include <random>

#include "nodal/errors.hpp"
#include "nodal/specfun.hpp"

using nodal::specfun::lambert_w0;
using nodal::specfun::ln_gamma;
using nodal::specfun::ln_gamma_ratio;

TEST_CASE("lambert_w0 special values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-15));
  // W(1/2 e^{-1/2}) = A_1 = 2/(theta_1 - 2) with theta_1 = 10.374
  CHECK(lambert_w0(0.5 * std::exp(-0.5)) == doctest::Approx(2.0 / 8.374).epsilon(1e-4));
}

TEST_CASE("lambert_w0 rejects x < -1/e") {
  CHECK_THROWS_AS(lambert_w0(-0.5), nodal::DomainError);
  CHECK_THROWS_AS(lambert_w0(std::nan("")), nodal::DomainError);
}

TEST_CASE("lambert_w0 inverts w e^w") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> expo(-30.0, 30.0);
  for (int n = 0; n < 2000; ++n) {
    const double x = std::exp(expo(rng));
    const double w = lambert_w0(x);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-14));
  }
  std::uniform_real_distribution<double> neg(-std::exp(-1.0) * 0.999999, 0.0);
  for (int n = 0; n < 500; ++n) {
    const double x = neg(rng);
    const double w = lambert_w0(x);
    CHECK(w >= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-15);
  }
}

TEST_CASE("lambert_w0 small argument keeps relative precision") {
  for (double x : {1e-300, 1e-100, 1e-20, 1e-8}) {
    const double w = lambert_w0(x);
    CHECK(w == doctest::Approx(x * (1.0 - x)).epsilon(1e-15));
  }
}

TEST_CASE("ln_gamma against std::lgamma") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> expo(-3.0, 7.0);
  for (int n = 0; n < 2000; ++n) {
    const double x = std::pow(10.0, expo(rng));
    const double ref = std::lgamma(x);
    CHECK(std::abs(ln_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
}

TEST_CASE("ln_gamma domain") {
  CHECK_THROWS_AS(ln_gamma(0.0), nodal::DomainError);
  CHECK_THROWS_AS(ln_gamma(-1.5), nodal::DomainError);
}

TEST_CASE("ln_gamma_ratio stays finite for large x") {
  // Gamma(x+1)/Gamma(x+1/2) ~ sqrt(x)
  const double x = 1e12;
  CHECK(std::exp(ln_gamma_ratio(x, 1.0, 0.5)) / std::sqrt(x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ln_gamma_ratio(3.0, 1.0, 0.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  // both branches agree where they meet
  for (double y : {20.0, 25.0, 60.0, 400.0}) {
    CHECK(ln_gamma_ratio(y, 1.25, 0.75) ==
          doctest::Approx(std::lgamma(y + 1.25) - std::lgamma(y + 0.75)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ln_gamma_ratio(0.5, -1.0, 0.0), nodal::DomainError);
}
