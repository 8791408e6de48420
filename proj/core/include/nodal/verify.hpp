#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodal/radial_ode.hpp"

namespace nodal::verify {

enum class Problem { dirichlet, neumann, plane };

const char* to_string(Problem bc);
/// Parses "dirichlet", "neumann" or "plane"; throws DomainError otherwise.
Problem parse_problem(const std::string& name);

struct ConvergenceRow {
  double p = 0.0;
  double computed = 0.0;
  double limit = 0.0;
  double abs_err = 0.0;
};

/// Finite-p values of one tracked quantity against its p -> infinity limit.
/// `extrapolated` is the 1/p least-squares limit; `rate` is the fitted slope
/// of -log(abs_err) against log p. The rate is descriptive only: the
/// asymptotic statements carry no rate.
struct ConvergenceReport {
  std::string quantity;
  Problem bc = Problem::dirichlet;
  int m = 1;
  double alpha = 0.0;
  int i = 0;
  std::vector<ConvergenceRow> rows;
  double extrapolated = 0.0;
  double rate = 0.0;

  /// abs_err strictly decreasing along increasing p.
  bool monotone() const;
};

/// Least-squares fit value(p) = L + c/p; returns L. Needs at least two rows
/// with distinct p, otherwise throws DomainError.
double richardson_extrapolate(std::span<const std::pair<double, double>> rows);

struct VerifyOptions {
  double tol = radial::kDefaultTol;
  bool parallel = true;
};

/// Solves at every p in p_list (strictly increasing, each > 1) and compares
/// radii, critical values, derivatives at zeros and energies with the limit
/// constants. Reports are ordered by quantity then index.
std::vector<ConvergenceReport> convergence_report(int m, double alpha, Problem bc,
                                                  std::span<const double> p_list,
                                                  const VerifyOptions& opt = {});

/// sup over radii of |p u(r) - gamma_{a,m} log(1/r)| (Dirichlet solutions).
double green_profile_check(const radial::RadialSolution& sol, std::span<const double> radii);

/// Default radii for the Green profile: n points uniformly on [0.2, 1].
std::vector<double> default_green_radii(int n = 81);

struct BubbleCheck {
  double sup_err = 0.0;           // sup |xi_i - Z_{i,a}| on the interval
  double r_over_eps = 0.0;        // r_i / eps_i (0 for i = 0)
  double s_over_eps = 0.0;        // s_i / eps_i
  double sigma = 0.0;             // sigma_{i,a}
  double eps_over_next = 0.0;     // eps_i / r_{i+1}
};

/// Compares the rescaled profile of the i-th nodal region with the bubble
/// Z_{i,a} on n points of [lo, hi] (0 < lo < hi). Throws DomainError when the
/// interval leaves the image of the nodal annulus.
BubbleCheck bubble_convergence_check(const radial::RadialSolution& sol, int i, double lo,
                                     double hi, int n = 201);

/// Default compact for bubble i: [sigma/2, 4 sigma] for i >= 1, [0.1, 4]
/// for the regular bubble.
std::pair<double, double> default_bubble_interval(int i, double alpha);

/// Green-profile and bubble sup-errors along p_list as reports with limit 0
/// ("green_profile", "xi_sup_err"). Dirichlet only.
std::vector<ConvergenceReport> profile_reports(int m, double alpha,
                                               std::span<const double> p_list,
                                               const VerifyOptions& opt = {});

/// A parameter grid for batch verification.
struct SweepConfig {
  std::vector<double> p;
  std::vector<int> m;
  std::vector<double> alpha;
  std::vector<Problem> bc;
  double tol = radial::kDefaultTol;
};

/// Runs convergence_report over the grid concurrently. The result is ordered
/// by (bc, m, alpha) in the order given in the config, independent of
/// scheduling.
std::vector<ConvergenceReport> run_sweep(const SweepConfig& config);

}  // namespace nodal::verify
