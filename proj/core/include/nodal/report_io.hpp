#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodal/bubbles.hpp"
#include "nodal/constants.hpp"
#include "nodal/radial_ode.hpp"
#include "nodal/verify.hpp"

namespace nodal::io {

// Number formatting shared by every writer. Parameters (p, alpha) use 6
// significant digits, measured values 17. Non-finite values become an empty
// CSV field and JSON null.
std::string fmt_param(double x);
std::string fmt_full(double x);
nlohmann::json json_number(double x);

/// Rows k = 1..n: theta_k, M^{(k)}_0, M^{(k)}_0/sqrt(k), the Dirichlet and
/// Neumann constants of the n-nodal table at index k (or k-1 for M and S)
/// and the whole-plane limits for k.
void write_constants_csv(std::ostream& out, int n, double alpha);
nlohmann::json constants_json(int n, double alpha);

void write_bounds_csv(std::ostream& out, int k_max, int m_max);
nlohmann::json bounds_json(int k_max, int m_max);

/// A solved problem: one of the bounded-domain solutions or the entire solution.
struct SolveResult {
  verify::Problem bc = verify::Problem::dirichlet;
  int m = 1;
  std::shared_ptr<const radial::WholePlaneSolution> whole;
  std::optional<radial::RadialSolution> bounded;  // empty for the plane
};

SolveResult solve(double p, double alpha, int m, verify::Problem bc, double tol);

/// Solution dump. With samples > 0 the dump carries n samples: on [0, 1] for
/// bounded problems and on [t_start, ln rho_m] in log-radius for the plane.
nlohmann::json solution_json(const SolveResult& s, int samples);
/// CSV: `log_r,r,u` samples when samples > 0, otherwise `quantity,i,value`.
void write_solution_csv(std::ostream& out, const SolveResult& s, int samples);

void write_convergence_csv(std::ostream& out, const std::vector<verify::ConvergenceReport>& reps);
nlohmann::json convergence_json(const std::vector<verify::ConvergenceReport>& reps, double tol);

struct BubbleChecks {
  bubbles::BubbleSpec spec;
  bubbles::QuadratureResult mass;
  double mass_exact = 0.0;
  std::optional<bubbles::SplitIntegrals> split;  // alpha = 0, i >= 1
};
BubbleChecks bubble_checks(const bubbles::BubbleSpec& spec);

void write_bubble_csv(std::ostream& out, const std::vector<bubbles::ProfileSample>& samples);
nlohmann::json bubble_json(const BubbleChecks& checks,
                           const std::vector<bubbles::ProfileSample>& samples);
/// Human-readable summary of the mass and split checks.
void write_bubble_summary(std::ostream& out, const BubbleChecks& checks);

/// Parses `key = v1,v2,...` lines (keys p, m, alpha, bc, tol; `#` comments;
/// integer ranges `a..b` for m). Throws DomainError on malformed input.
verify::SweepConfig parse_sweep_config(std::istream& in, double default_tol);

/// Comma-separated list of reals; throws DomainError on bad tokens.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace nodal::io
