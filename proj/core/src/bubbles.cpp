#include "nodal/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

namespace nodal::bubbles {

namespace {

constexpr unsigned kMaxDepth = 15;

// log(e^a + e^b) without overflow.
double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol, const char* what) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(f, a, b, kMaxDepth, rel_tol, &err, &l1);
  if (!std::isfinite(value) || err > std::max(1e3 * rel_tol, 1e-9) * std::abs(value)) {
    throw QuadratureError(
        fmt::format("{}: quadrature did not converge (estimate {:.3e})", what, err), err);
  }
  return {value, err};
}

// int_split^inf exp(log_f(s)) ds via s = split / u on (0, 1], with the
// Jacobian folded into the exponent so that tiny u cannot overflow it.
template <class LogF>
QuadratureResult integrate_tail(LogF&& log_f, double split, double rel_tol, const char* what) {
  const double log_split = std::log(split);
  auto mapped = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double log_u = std::log(u);
    return std::exp(log_f(split / u) + log_split - 2.0 * log_u);
  };
  return integrate(mapped, 0.0, 1.0, rel_tol, what);
}

}  // namespace

double BubbleSpec::theta_log_beta() const { return theta_i * std::log(beta_i); }

BubbleSpec make_bubble(int i, double alpha) {
  if (i < 0) throw DomainError(fmt::format("bubble index {} must be >= 0", i));
  const auto table = constants::theta_sequence(i);
  return make_bubble_from_theta(i, table[i], alpha);
}

BubbleSpec make_bubble_from_theta(int i, double theta, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("bubble weight exponent alpha must be >= 0");
  if (!(theta >= 2.0)) throw DomainError("bubble theta must be >= 2");
  BubbleSpec spec;
  spec.i = i;
  spec.alpha = alpha;
  spec.theta_i = theta;
  if (theta == 2.0) {
    spec.beta_i = 2.0 * std::numbers::sqrt2;
    spec.sigma_i_alpha = 0.0;
    return spec;
  }
  const double log_beta = -0.5 * std::log(2.0) +
                          (theta + 2.0) / (2.0 * theta) * std::log(theta + 2.0) +
                          (theta - 2.0) / (2.0 * theta) * std::log(theta - 2.0);
  spec.beta_i = std::exp(log_beta);
  spec.sigma_i_alpha = std::pow((theta * theta - 4.0) / 2.0, 1.0 / (2.0 + alpha));
  return spec;
}

double bubble_profile(const BubbleSpec& spec, double r) {
  if (!(r >= 0.0)) throw DomainError(fmt::format("bubble_profile: radius {} < 0", r));
  const double th = spec.theta_i;
  const double a2 = spec.alpha + 2.0;
  const double tlb = spec.theta_log_beta();
  if (r == 0.0) {
    if (th == 2.0) return 0.0;  // beta_0^2 = 8
    return -std::numeric_limits<double>::infinity();
  }
  const double lr = std::log(r);
  return std::log(2.0 * th * th) + tlb + 0.5 * a2 * (th - 2.0) * lr -
         2.0 * log_add_exp(tlb, 0.5 * a2 * th * lr);
}

double bubble_profile_derivative(const BubbleSpec& spec, double r) {
  if (!(r > 0.0)) throw DomainError("bubble_profile_derivative: radius must be > 0");
  const double th = spec.theta_i;
  const double a2 = spec.alpha + 2.0;
  // q = r^{a2 th/2} / (beta^th + r^{a2 th/2}) in (0, 1)
  const double x = 0.5 * a2 * th * std::log(r) - spec.theta_log_beta();
  const double q = 1.0 / (1.0 + std::exp(-x));
  return (0.5 * a2 * (th - 2.0) - a2 * th * q) / r;
}

double bubble_mass_exact(const BubbleSpec& spec) {
  return 8.0 * std::numbers::pi * spec.theta_i / (spec.alpha + 2.0);
}

QuadratureResult bubble_mass(const BubbleSpec& spec, double rel_tol) {
  const double weight = 1.0 + spec.alpha;
  auto log_integrand = [&](double s) { return bubble_profile(spec, s) + weight * std::log(s); };
  auto integrand = [&](double s) { return s > 0.0 ? std::exp(log_integrand(s)) : 0.0; };
  const double split = spec.i == 0 || spec.theta_i == 2.0 ? 1.0 : spec.sigma_i_alpha;
  const auto inner = integrate(integrand, 0.0, split, rel_tol, "bubble_mass(inner)");
  const auto outer = integrate_tail(log_integrand, split, rel_tol, "bubble_mass(tail)");
  return {2.0 * std::numbers::pi * (inner.value + outer.value),
          2.0 * std::numbers::pi * (inner.error_estimate + outer.error_estimate)};
}

SplitIntegrals bubble_split_integrals(const BubbleSpec& spec, double rel_tol) {
  if (spec.alpha != 0.0) throw DomainError("bubble_split_integrals requires alpha = 0");
  if (spec.theta_i <= 2.0) throw DomainError("bubble_split_integrals requires i >= 1");
  auto log_integrand = [&](double s) { return bubble_profile(spec, s) + std::log(s); };
  auto integrand = [&](double s) { return s > 0.0 ? std::exp(log_integrand(s)) : 0.0; };
  SplitIntegrals out;
  out.inner = integrate(integrand, 0.0, spec.sigma_i_alpha, rel_tol, "split(inner)");
  out.outer = integrate_tail(log_integrand, spec.sigma_i_alpha, rel_tol, "split(outer)");
  return out;
}

double bubble_pde_residual(const BubbleSpec& spec, std::span<const double> r_grid,
                           double h) {
  if (!(h > 0.0)) throw DomainError("bubble_pde_residual: step must be > 0");
  const double a2 = spec.alpha + 2.0;
  const double coef = 0.25 * a2 * a2;
  double worst = 0.0;
  for (const double r : r_grid) {
    if (!(r > h)) throw DomainError("bubble_pde_residual: grid must stay above the step");
    const double zm = bubble_profile(spec, r - h);
    const double z0 = bubble_profile(spec, r);
    const double zp = bubble_profile(spec, r + h);
    const double d2 = (zp - 2.0 * z0 + zm) / (h * h);
    const double d1 = (zp - zm) / (2.0 * h);
    const double res = d2 + d1 / r + coef * std::pow(r, spec.alpha) * std::exp(z0);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

std::vector<ProfileSample> sample_profile(const BubbleSpec& spec, double r_min,
                                          double r_max, int n) {
  if (n < 1) throw DomainError("sample_profile: n must be >= 1");
  if (!(r_min >= 0.0) || !(r_max >= r_min)) {
    throw DomainError("sample_profile: need 0 <= r_min <= r_max");
  }
  std::vector<ProfileSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double r =
        n == 1 ? r_min : r_min + (r_max - r_min) * static_cast<double>(k) / (n - 1);
    const double z = bubble_profile(spec, r);
    out.push_back({r, z, std::exp(z)});
  }
  return out;
}

}  // namespace nodal::bubbles
