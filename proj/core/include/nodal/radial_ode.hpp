#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nodal/dopri5.hpp"

namespace nodal::radial {

/// Default local error tolerance (overridable from the CLI via NODAL_TOL).
inline constexpr double kDefaultTol = 1e-10;

/// Integration state in log-radius t = ln r:
///   u, u_t, and the running energies p int u_t^2 dt, p int |u|^{p+1} e^{(2+a)t} dt.
using RadialState = ode::State<4>;

struct Sample {
  double t;   // log-radius
  double u;
  double ut;  // du/dt = r du/dr
};

/// An event (zero of u or of u_t) with the full integration state at it.
struct EventPoint {
  double t = 0.0;
  RadialState y{};
};

/// The radial entire solution w of -Delta w = |x|^a |w|^{p-1} w in the plane,
/// normalised by w(0) = 1, integrated in log-radius up to its m_max-th zero.
///
/// Zeros rho_1 < rho_2 < ... and critical points delta_1 < delta_2 < ...
/// are stored as log-radii; delta_0 = 0 is implicit.
class WholePlaneSolution {
 public:
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double tol() const { return tol_; }
  int m_max() const { return static_cast<int>(zeros_.size()); }

  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<EventPoint>& zero_events() const { return zeros_; }
  const std::vector<EventPoint>& crit_events() const { return crits_; }

  std::vector<double> log_zeros() const;  // lambda_m = ln rho_m, m = 1..m_max
  std::vector<double> log_crit() const;   // tau_m = ln delta_m, m = 1..m_max-1
  std::vector<double> crit_values() const;  // w(delta_m), m = 0..m_max-1 (w(0) = 1)

  /// Cubic Hermite interpolation of (u, u_t) on the step samples; below the
  /// first sample the small-radius expansion is used.
  double u_at(double t) const;
  double ut_at(double t) const;

  /// Full state from the integrator's dense output.
  RadialState dense_at(double t) const;

  /// int_{ta}^{tb} e^{(2+a)t} |w|^{p-1} w dt by Gauss-Kronrod on each step's
  /// dense output.
  double source_integral(double ta, double tb) const;

  const std::vector<ode::DenseStep<4>>& steps() const { return steps_; }
  const ode::Dopri5Stats& stats() const { return stats_; }
  double t_start() const { return t_start_; }

 private:
  friend WholePlaneSolution solve_whole_plane(double, double, int, double);

  std::size_t step_index(double t) const;

  double p_ = 2.0;
  double alpha_ = 0.0;
  double tol_ = kDefaultTol;
  double t_start_ = 0.0;
  std::vector<Sample> samples_;
  std::vector<ode::DenseStep<4>> steps_;
  std::vector<EventPoint> zeros_;
  std::vector<EventPoint> crits_;
  ode::Dopri5Stats stats_;
};

/// Integrates u_tt + e^{(2+a)t} |u|^{p-1} u = 0 from the small-radius
/// expansion u = 1 - r^{2+a}/(2+a)^2 until the m_max-th zero of u.
/// Throws DomainError for p <= 1, alpha < 0, m_max < 1 or tol <= 0, and
/// NumericalError if the zeros are not found before the predicted t cap.
WholePlaneSolution solve_whole_plane(double p, double alpha, int m_max,
                                     double tol = kDefaultTol);

enum class BoundaryCondition { dirichlet, neumann };

/// The m-nodal solution on the unit disc obtained from w by the scaling
/// u(r) = R^{(a+2)/(p-1)} w(R r), with R = rho_m (Dirichlet) or
/// R = delta_{m-1} (Neumann). All radii are carried as logarithms; the plain
/// radii are exp() of those and may underflow to 0 for very large p.
struct RadialSolution {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  int m = 1;
  double p = 2.0;
  double alpha = 0.0;
  std::shared_ptr<const WholePlaneSolution> whole;

  double log_scale = 0.0;      // ln R
  double log_amplitude = 0.0;  // (a+2)/(p-1) * ln R

  std::vector<double> log_zeros;     // ln r_i: i = 1..m (Dirichlet), 1..m-1 (Neumann)
  std::vector<double> log_crit;      // ln s_i: i = 1..m-1; s_0 = 0 implicit
  std::vector<double> crit_values;   // u(s_i), i = 0..m-1
  std::vector<double> zero_slopes;   // p |u'(r_i)| r_i, same indexing as log_zeros
  double boundary_derivative = 0.0;  // p u'(1) (0 for Neumann)
  double boundary_value = 0.0;       // u(1)
  double energy_grad = 0.0;          // p int_0^1 |u'|^2 r dr
  double energy_pot = 0.0;           // p int_0^1 |u|^{p+1} r^{1+a} dr

  std::vector<double> zeros() const;  // r_i
  std::vector<double> crit() const;   // s_i, i = 1..m-1

  /// u at radius exp(x), x <= 0 (x = -inf gives u(0)).
  double u_at_log_radius(double x) const;
  /// r u'(r) at radius exp(x).
  double ru_prime_at_log_radius(double x) const;
};

RadialSolution dirichlet_solution(std::shared_ptr<const WholePlaneSolution> w, int m);
RadialSolution neumann_solution(std::shared_ptr<const WholePlaneSolution> w, int m);

struct Energies {
  double energy_grad;
  double energy_pot;
};
Energies energies(const RadialSolution& sol);

/// |E_pot - (1 + 1/p)(p u'(1))^2 / 4| / E_pot. Dirichlet with alpha = 0 only.
double pohozaev_residual(const RadialSolution& sol);

/// |u'(s)s - u'(t)t - int_s^t |u|^{p-1} u r^{1+a} dr| relative to the largest
/// of the three terms. Requires 0 < s < t <= 1.
double flux_identity_residual(const RadialSolution& sol, double s, double t);

struct HenonCrosscheck {
  double residual = 0.0;        // max |mapped - direct| over log-radii of zeros and crit points
  double value_residual = 0.0;  // max |mapped - direct| over |w(delta_m)|
  WholePlaneSolution direct;
};

/// Maps the alpha = 0 solution through r -> r^{(a+2)/2} with amplitude
/// ((a+2)/2)^{2/(p-1)}, renormalises w(0) = 1 and compares zeros and critical
/// points with a direct solve at alpha (same p, m_max, tol).
HenonCrosscheck henon_crosscheck(const WholePlaneSolution& w0, double alpha);

struct RescaledSample {
  double r;
  double xi;
};

struct RescaledProfile {
  int i = 0;
  double eps = 0.0;
  double log_eps = 0.0;
  double r_lo = 0.0;  // r_i / eps (0 for i = 0)
  double r_hi = 0.0;  // r_{i+1} / eps
  double s_over_eps = 0.0;  // s_i / eps
  std::vector<RescaledSample> samples;
};

/// Scaling parameter and annulus of the i-th nodal region (no samples).
RescaledProfile rescaling(const RadialSolution& sol, int i);

/// xi_i(r) = p [(-1)^i u(eps_i r) - |u(s_i)|] / |u(s_i)| on r_grid, which must
/// lie inside [r_i/eps_i, r_{i+1}/eps_i]; throws DomainError otherwise.
RescaledProfile rescaled_profile(const RadialSolution& sol, int i,
                                 std::span<const double> r_grid);

struct GrowthBounds {
  double strauss_max;      // max p r^{2+a} |u|^{p-1}
  double derivative_max;   // max p |u'(r)| r
};
GrowthBounds growth_bounds(const RadialSolution& sol);

/// Predicted ln rho_m from the limit constants, (p-1)/(2+a) ln M^{(m)}_0.
double predicted_log_zero(double p, double alpha, int m);

}  // namespace nodal::radial
