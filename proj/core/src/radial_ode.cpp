#include "nodal/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

namespace nodal::radial {

namespace {

constexpr double kUnderflowExponent = -700.0;
// The integration starts where e^{(2+a)t} reaches this value.
constexpr double kStartWeight = 1e-12;
constexpr double kCapFactor = 1.2;
constexpr double kCapMargin = 20.0;

struct Params {
  double p;
  double alpha;
};

// sign(u) e^{(2+a)t} |u|^p, i.e. the source term of the log-radius equation.
double source(const Params& par, double t, double u) {
  if (u == 0.0) return 0.0;
  const double ex = (2.0 + par.alpha) * t + par.p * std::log(std::abs(u));
  if (ex < kUnderflowExponent) return 0.0;
  return std::copysign(std::exp(ex), u);
}

double potential_density(const Params& par, double t, double u) {
  if (u == 0.0) return 0.0;
  const double ex = (2.0 + par.alpha) * t + (par.p + 1.0) * std::log(std::abs(u));
  if (ex < kUnderflowExponent) return 0.0;
  return par.p * std::exp(ex);
}

RadialState rhs(const Params& par, double t, const RadialState& y) {
  const double u = y[0];
  const double ut = y[1];
  return {ut, -source(par, t, u), par.p * ut * ut, potential_density(par, t, u)};
}

// Small-radius expansion u = 1 - x + p x^2 / 4 with x = r^{2+a}/(2+a)^2.
RadialState series_state(const Params& par, double t) {
  const double a2 = 2.0 + par.alpha;
  const double e = std::exp(a2 * t);
  const double x = e / (a2 * a2);
  RadialState y;
  y[0] = 1.0 - x + 0.25 * par.p * x * x;
  y[1] = -e / a2 + 0.5 * par.p * e * e / (a2 * a2 * a2);
  y[2] = par.p * e * e / (2.0 * a2 * a2 * a2);
  y[3] = par.p * e / a2;
  return y;
}

bool crosses(double a, double b) { return (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0); }

double locate(const ode::DenseStep<4>& step, std::size_t comp) {
  double lo = step.t0;
  double hi = step.t1();
  const double f_lo = step.component(comp, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = step.component(comp, mid);
    if (crosses(f_lo, f_mid) || f_mid == 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void validate(double p, double alpha, double tol) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError(fmt::format("exponent p = {} must be > 1", p));
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError(fmt::format("weight exponent alpha = {} must be >= 0", alpha));
  }
  if (!(tol > 0.0)) throw DomainError(fmt::format("tolerance {} must be > 0", tol));
}

double hermite(double t0, double t1, double y0, double y1, double d0, double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

}  // namespace

double predicted_log_zero(double p, double alpha, int m) {
  const double m0 = constants::m0_product_formula(m - 1);
  return (p - 1.0) / (2.0 + alpha) * std::log(m0);
}

WholePlaneSolution solve_whole_plane(double p, double alpha, int m_max, double tol) {
  validate(p, alpha, tol);
  if (m_max < 1) throw DomainError("solve_whole_plane: m_max must be >= 1");

  const Params par{p, alpha};
  WholePlaneSolution sol;
  sol.p_ = p;
  sol.alpha_ = alpha;
  sol.tol_ = tol;
  sol.t_start_ = std::log(kStartWeight) / (2.0 + alpha);

  const double predicted = predicted_log_zero(p, alpha, m_max);
  const double t_cap = kCapFactor * std::max(predicted, 0.0) + kCapMargin;

  const RadialState y0 = series_state(par, sol.t_start_);
  sol.samples_.push_back({sol.t_start_, y0[0], y0[1]});

  ode::Dopri5Options opt;
  opt.rtol = tol;
  opt.atol = tol;

  auto f = [&](double t, const RadialState& y) { return rhs(par, t, y); };
  auto observe = [&](const ode::DenseStep<4>& step) {
    sol.steps_.push_back(step);
    const RadialState a = step(step.t0);
    const RadialState b = step(step.t1());

    struct Found {
      double t;
      bool is_zero;
    };
    Found found[2];
    int n_found = 0;
    if (crosses(a[0], b[0])) found[n_found++] = {locate(step, 0), true};
    if (crosses(a[1], b[1])) found[n_found++] = {locate(step, 1), false};
    if (n_found == 2 && found[1].t < found[0].t) std::swap(found[0], found[1]);

    for (int k = 0; k < n_found; ++k) {
      EventPoint ev{found[k].t, step(found[k].t)};
      if (found[k].is_zero) {
        ev.y[0] = 0.0;
        sol.zeros_.push_back(ev);
        if (static_cast<int>(sol.zeros_.size()) == m_max) break;
      } else {
        ev.y[1] = 0.0;
        sol.crits_.push_back(ev);
      }
    }
    sol.samples_.push_back({step.t1(), b[0], b[1]});
    return static_cast<int>(sol.zeros_.size()) < m_max;
  };

  sol.stats_ = ode::integrate_dopri5<4>(f, sol.t_start_, y0, t_cap, opt, observe);

  if (sol.m_max() < m_max) {
    throw NumericalError(fmt::format(
        "solve_whole_plane: found {} of {} zeros before t = {:.6g} (p = {}, alpha = {})",
        sol.m_max(), m_max, t_cap, p, alpha));
  }
  // Interlacing: one critical point strictly between consecutive zeros.
  if (static_cast<int>(sol.crits_.size()) != m_max - 1) {
    throw NumericalError("solve_whole_plane: critical points do not interlace the zeros");
  }
  for (int k = 0; k + 1 < m_max; ++k) {
    const double c = sol.crits_[static_cast<std::size_t>(k)].t;
    if (!(sol.zeros_[static_cast<std::size_t>(k)].t < c &&
          c < sol.zeros_[static_cast<std::size_t>(k) + 1].t)) {
      throw NumericalError("solve_whole_plane: critical points do not interlace the zeros");
    }
  }
  return sol;
}

std::vector<double> WholePlaneSolution::log_zeros() const {
  std::vector<double> out;
  out.reserve(zeros_.size());
  for (const auto& e : zeros_) out.push_back(e.t);
  return out;
}

std::vector<double> WholePlaneSolution::log_crit() const {
  std::vector<double> out;
  out.reserve(crits_.size());
  for (const auto& e : crits_) out.push_back(e.t);
  return out;
}

std::vector<double> WholePlaneSolution::crit_values() const {
  std::vector<double> out{1.0};
  for (const auto& e : crits_) out.push_back(e.y[0]);
  return out;
}

std::size_t WholePlaneSolution::step_index(double t) const {
  if (steps_.empty() || t < steps_.front().t0 || t > steps_.back().t1()) {
    throw DomainError(fmt::format("log-radius {} outside the integrated range", t));
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double v, const ode::DenseStep<4>& s) { return v < s.t0; });
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - steps_.begin() - 1, 0));
}

RadialState WholePlaneSolution::dense_at(double t) const {
  if (t < t_start_) return series_state({p_, alpha_}, t);
  return steps_[step_index(t)](t);
}

double WholePlaneSolution::u_at(double t) const {
  if (t == -std::numeric_limits<double>::infinity()) return 1.0;
  if (t < t_start_) return series_state({p_, alpha_}, t)[0];
  if (t > samples_.back().t) {
    throw DomainError(fmt::format("log-radius {} beyond the integrated range", t));
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.t; });
  if (it == samples_.end()) return samples_.back().u;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  return hermite(lo.t, hi.t, lo.u, hi.u, lo.ut, hi.ut, t);
}

double WholePlaneSolution::ut_at(double t) const {
  if (t == -std::numeric_limits<double>::infinity()) return 0.0;
  if (t < t_start_) return series_state({p_, alpha_}, t)[1];
  if (t > samples_.back().t) {
    throw DomainError(fmt::format("log-radius {} beyond the integrated range", t));
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.t; });
  if (it == samples_.end()) return samples_.back().ut;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  const Params par{p_, alpha_};
  return hermite(lo.t, hi.t, lo.ut, hi.ut, -source(par, lo.t, lo.u),
                 -source(par, hi.t, hi.u), t);
}

double WholePlaneSolution::source_integral(double ta, double tb) const {
  if (tb < ta) return -source_integral(tb, ta);
  const Params par{p_, alpha_};
  const double a2 = 2.0 + alpha_;
  double total = 0.0;
  if (ta < t_start_) {
    // |w| = 1 to within 1e-12 below the start point.
    const double upper = std::min(tb, t_start_);
    total += (std::exp(a2 * upper) - std::exp(a2 * ta)) / a2;
    ta = upper;
  }
  if (tb <= ta) return total;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (std::size_t k = step_index(ta); k < steps_.size(); ++k) {
    const auto& step = steps_[k];
    const double lo = std::max(ta, step.t0);
    const double hi = std::min(tb, step.t1());
    if (hi > lo) {
      auto integrand = [&](double t) { return source(par, t, step.component(0, t)); };
      total += Rule::integrate(integrand, lo, hi, 5, 1e-14);
    }
    if (step.t1() >= tb) break;
  }
  return total;
}

std::vector<double> RadialSolution::zeros() const {
  std::vector<double> out;
  for (double x : log_zeros) out.push_back(std::exp(x));
  return out;
}

std::vector<double> RadialSolution::crit() const {
  std::vector<double> out;
  for (double x : log_crit) out.push_back(std::exp(x));
  return out;
}

double RadialSolution::u_at_log_radius(double x) const {
  return std::exp(log_amplitude) * whole->u_at(log_scale + x);
}

double RadialSolution::ru_prime_at_log_radius(double x) const {
  return std::exp(log_amplitude) * whole->ut_at(log_scale + x);
}

namespace {

RadialSolution scaled(std::shared_ptr<const WholePlaneSolution> w, BoundaryCondition bc,
                      int m, const EventPoint& boundary) {
  RadialSolution sol;
  sol.bc = bc;
  sol.m = m;
  sol.p = w->p();
  sol.alpha = w->alpha();
  sol.log_scale = boundary.t;
  sol.log_amplitude = (sol.alpha + 2.0) / (sol.p - 1.0) * boundary.t;
  const double amp = std::exp(sol.log_amplitude);

  const auto& zeros = w->zero_events();
  const auto& crits = w->crit_events();
  const std::size_t n_zeros =
      bc == BoundaryCondition::dirichlet ? static_cast<std::size_t>(m)
                                         : static_cast<std::size_t>(m - 1);
  for (std::size_t i = 0; i < n_zeros; ++i) {
    sol.log_zeros.push_back(zeros[i].t - boundary.t);
    sol.zero_slopes.push_back(sol.p * amp * std::abs(zeros[i].y[1]));
  }
  sol.crit_values.push_back(amp);
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(m); ++i) {
    sol.log_crit.push_back(crits[i].t - boundary.t);
    sol.crit_values.push_back(amp * crits[i].y[0]);
  }
  if (bc == BoundaryCondition::dirichlet) {
    sol.log_zeros.back() = 0.0;
  } else {
    sol.log_crit.back() = 0.0;
  }
  sol.boundary_derivative = sol.p * amp * boundary.y[1];
  sol.boundary_value = amp * boundary.y[0];
  sol.energy_grad = amp * amp * boundary.y[2];
  sol.energy_pot = amp * amp * boundary.y[3];
  sol.whole = std::move(w);
  return sol;
}

}  // namespace

RadialSolution dirichlet_solution(std::shared_ptr<const WholePlaneSolution> w, int m) {
  if (!w) throw DomainError("dirichlet_solution: null whole-plane solution");
  if (m < 1 || m > w->m_max()) {
    throw DomainError(
        fmt::format("dirichlet_solution: m = {} outside 1..{}", m, w->m_max()));
  }
  const EventPoint boundary = w->zero_events()[static_cast<std::size_t>(m - 1)];
  return scaled(std::move(w), BoundaryCondition::dirichlet, m, boundary);
}

RadialSolution neumann_solution(std::shared_ptr<const WholePlaneSolution> w, int m) {
  if (!w) throw DomainError("neumann_solution: null whole-plane solution");
  if (m < 2) {
    throw DomainError("neumann_solution: nontrivial Neumann solutions change sign (m >= 2)");
  }
  if (m > w->m_max()) {
    throw DomainError(
        fmt::format("neumann_solution: m = {} exceeds m_max = {}", m, w->m_max()));
  }
  const EventPoint boundary = w->crit_events()[static_cast<std::size_t>(m - 2)];
  return scaled(std::move(w), BoundaryCondition::neumann, m, boundary);
}

Energies energies(const RadialSolution& sol) { return {sol.energy_grad, sol.energy_pot}; }

double pohozaev_residual(const RadialSolution& sol) {
  if (sol.bc != BoundaryCondition::dirichlet || sol.alpha != 0.0) {
    throw DomainError("pohozaev_residual applies to Dirichlet solutions with alpha = 0");
  }
  const double pu = sol.boundary_derivative;
  const double rhs = (1.0 + 1.0 / sol.p) * 0.25 * pu * pu;
  return std::abs(sol.energy_pot - rhs) / sol.energy_pot;
}

double flux_identity_residual(const RadialSolution& sol, double s, double t) {
  if (!(s > 0.0 && s < t && t <= 1.0)) {
    throw DomainError("flux_identity_residual: need 0 < s < t <= 1");
  }
  const auto& w = *sol.whole;
  const double ts = sol.log_scale + std::log(s);
  const double tt = sol.log_scale + std::log(t);
  // All three terms carry the common factor R^{(a+2)/(p-1)}, which cancels.
  const double lhs_s = w.dense_at(ts)[1];
  const double lhs_t = w.dense_at(tt)[1];
  const double integral = w.source_integral(ts, tt);
  const double scale = std::max({std::abs(lhs_s), std::abs(lhs_t), std::abs(integral)});
  if (scale == 0.0) return 0.0;
  return std::abs(lhs_s - lhs_t - integral) / scale;
}

HenonCrosscheck henon_crosscheck(const WholePlaneSolution& w0, double alpha) {
  if (w0.alpha() != 0.0) throw DomainError("henon_crosscheck: base solution needs alpha = 0");
  if (!(alpha > 0.0)) throw DomainError("henon_crosscheck: alpha must be > 0");
  HenonCrosscheck out;
  out.direct = solve_whole_plane(w0.p(), alpha, w0.m_max(), w0.tol());

  const double power = 2.0 / (alpha + 2.0);
  const double log_c = std::log((alpha + 2.0) / 2.0);
  auto mapped = [&](double t0) { return power * (t0 + log_c); };

  const auto z0 = w0.log_zeros();
  const auto za = out.direct.log_zeros();
  const auto c0 = w0.log_crit();
  const auto ca = out.direct.log_crit();
  const auto v0 = w0.crit_values();
  const auto va = out.direct.crit_values();
  for (std::size_t k = 0; k < z0.size(); ++k) {
    out.residual = std::max(out.residual, std::abs(mapped(z0[k]) - za[k]));
  }
  for (std::size_t k = 0; k < c0.size(); ++k) {
    out.residual = std::max(out.residual, std::abs(mapped(c0[k]) - ca[k]));
  }
  for (std::size_t k = 0; k < v0.size(); ++k) {
    out.value_residual = std::max(out.value_residual, std::abs(v0[k] - va[k]));
  }
  return out;
}

RescaledProfile rescaling(const RadialSolution& sol, int i) {
  if (i < 0 || i > sol.m - 1) {
    throw DomainError(fmt::format("rescaling: index {} outside 0..{}", i, sol.m - 1));
  }
  const double a2 = sol.alpha + 2.0;
  const double log_u = std::log(std::abs(sol.crit_values[static_cast<std::size_t>(i)]));
  RescaledProfile out;
  out.i = i;
  out.log_eps = (2.0 / a2) * std::log(a2 / 2.0) -
                (std::log(sol.p) + (sol.p - 1.0) * log_u) / a2;
  out.eps = std::exp(out.log_eps);
  const auto iz = static_cast<std::size_t>(i);
  out.r_lo = i == 0 ? 0.0 : std::exp(sol.log_zeros[iz - 1] - out.log_eps);
  const double log_upper = iz < sol.log_zeros.size() ? sol.log_zeros[iz] : 0.0;
  out.r_hi = std::exp(log_upper - out.log_eps);
  out.s_over_eps = i == 0 ? 0.0 : std::exp(sol.log_crit[iz - 1] - out.log_eps);
  return out;
}

RescaledProfile rescaled_profile(const RadialSolution& sol, int i,
                                 std::span<const double> r_grid) {
  RescaledProfile out = rescaling(sol, i);
  const auto& w = *sol.whole;
  const double w_crit =
      std::abs(sol.crit_values[static_cast<std::size_t>(i)]) / std::exp(sol.log_amplitude);
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;
  const double slack = 1e-12;
  for (const double r : r_grid) {
    if (!(r >= out.r_lo * (1.0 - slack) && r <= out.r_hi * (1.0 + slack))) {
      throw DomainError(fmt::format(
          "rescaled_profile: r = {} outside the nodal annulus [{}, {}]", r, out.r_lo, out.r_hi));
    }
    const double t = r == 0.0 ? -std::numeric_limits<double>::infinity()
                              : sol.log_scale + out.log_eps + std::log(r);
    const double wt = std::min(t, w.samples().back().t);
    out.samples.push_back({r, sol.p * (sign * w.u_at(wt) / w_crit - 1.0)});
  }
  return out;
}

GrowthBounds growth_bounds(const RadialSolution& sol) {
  const auto& w = *sol.whole;
  const double a2 = sol.alpha + 2.0;
  const double amp = std::exp(sol.log_amplitude);
  GrowthBounds out{0.0, 0.0};
  for (const auto& s : w.samples()) {
    if (s.t > sol.log_scale) break;
    if (s.u != 0.0) {
      const double ex = a2 * s.t + (sol.p - 1.0) * std::log(std::abs(s.u));
      out.strauss_max = std::max(out.strauss_max, sol.p * std::exp(ex));
    }
    out.derivative_max = std::max(out.derivative_max, sol.p * amp * std::abs(s.ut));
  }
  return out;
}

}  // namespace nodal::radial
