#include "nodal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <tuple>

#include <fmt/format.h>

#include "nodal/bubbles.hpp"
#include "nodal/constants.hpp"
#include "nodal/errors.hpp"

namespace nodal::verify {

namespace {

using radial::RadialSolution;
using radial::WholePlaneSolution;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_p_list(std::span<const double> p_list) {
  if (p_list.empty()) throw DomainError("p list must not be empty");
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    if (!(p_list[k] > 1.0)) throw DomainError(fmt::format("p = {} must be > 1", p_list[k]));
    if (k > 0 && !(p_list[k] > p_list[k - 1])) {
      throw DomainError("p list must be strictly increasing");
    }
  }
}

// Runs `work(p)` for every p, concurrently when requested, preserving order.
template <class Work>
auto map_over_p(std::span<const double> p_list, bool parallel, Work work) {
  using Result = decltype(work(0.0));
  std::vector<Result> out;
  out.reserve(p_list.size());
  if (!parallel) {
    for (double p : p_list) out.push_back(work(p));
    return out;
  }
  std::vector<std::future<Result>> pending;
  pending.reserve(p_list.size());
  for (double p : p_list) pending.push_back(std::async(std::launch::async, work, p));
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

// Finite-p measurements of one solve, keyed by (quantity, index).
using Key = std::pair<std::string, int>;
using Measurements = std::map<Key, std::pair<double, double>>;  // computed, limit

double power_of_log_radius(double log_r, double p) { return std::exp(2.0 / (p - 1.0) * log_r); }

Measurements measure_dirichlet(const RadialSolution& sol, const constants::ThetaTable& table) {
  const int m = sol.m;
  const double p = sol.p;
  const double a = sol.alpha;
  const double power = 2.0 / (a + 2.0);
  const auto ct = constants::constant_table(table, m, a);
  Measurements out;
  for (int i = 1; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"r_i^(2/(p-1))", i}] = {power_of_log_radius(sol.log_zeros[iz - 1], p),
                                 std::pow(ct.R[iz], power)};
    out[{"s_i^(2/(p-1))", i}] = {power_of_log_radius(sol.log_crit[iz - 1], p),
                                 std::pow(ct.S[iz], power)};
  }
  for (int i = 0; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"|u(s_i)|", i}] = {std::abs(sol.crit_values[iz]), ct.M[iz]};
  }
  for (int i = 1; i <= m; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"p|u'(r_i)|r_i", i}] = {sol.zero_slopes[iz - 1], 0.5 * (a + 2.0) * ct.D[iz]};
  }
  out[{"energy", m}] = {sol.energy_grad,
                        constants::energy_limit(table, m, a, constants::Boundary::dirichlet)};
  return out;
}

Measurements measure_neumann(const RadialSolution& sol, const constants::ThetaTable& table) {
  const int m = sol.m;
  const double p = sol.p;
  const double a = sol.alpha;
  const double power = 2.0 / (a + 2.0);
  const auto nt = constants::neumann_constants(constants::constant_table(table, m, a));
  Measurements out;
  for (int i = 1; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"r_i^(2/(p-1))", i}] = {power_of_log_radius(sol.log_zeros[iz - 1], p),
                                 std::pow(nt.Rbar[iz], power)};
    out[{"p|u'(r_i)|r_i", i}] = {sol.zero_slopes[iz - 1], 0.5 * (a + 2.0) * nt.Dbar[iz]};
  }
  for (int i = 1; i <= m - 2; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"s_i^(2/(p-1))", i}] = {power_of_log_radius(sol.log_crit[iz - 1], p),
                                 std::pow(nt.Sbar[iz], power)};
  }
  for (int i = 0; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out[{"|u(s_i)|", i}] = {std::abs(sol.crit_values[iz]), nt.Mbar[iz]};
  }
  out[{"energy", m}] = {sol.energy_grad,
                        constants::energy_limit(table, m, a, constants::Boundary::neumann)};
  return out;
}

Measurements measure_plane(const WholePlaneSolution& w, int m,
                           const constants::ThetaTable& table) {
  const double p = w.p();
  const auto zeros = w.zero_events();
  const auto crits = w.crit_events();
  Measurements out;
  for (int j = 1; j <= m; ++j) {
    const auto jz = static_cast<std::size_t>(j);
    const auto lim = constants::whole_plane_limits(table, j, w.alpha());
    out[{"rho_m", j}] = {power_of_log_radius(zeros[jz - 1].t, p), lim.rho_lim};
    out[{"p|w'(rho_m)|rho_m", j}] = {p * std::abs(zeros[jz - 1].y[1]), lim.drv_lim};
    out[{"delta_m", j}] = {power_of_log_radius(crits[jz - 1].t, p), lim.delta_lim};
    out[{"|w(delta_m)|", j}] = {std::abs(crits[jz - 1].y[0]), lim.val_lim};
  }
  return out;
}

double fitted_rate(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) return kNaN;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    if (!(r.abs_err > 0.0)) return kNaN;
    const double x = std::log(r.p);
    const double y = std::log(r.abs_err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return kNaN;
  return -(n * sxy - sx * sy) / det;
}

void finish(ConvergenceReport& rep) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rep.rows) pts.emplace_back(r.p, r.computed);
  rep.extrapolated = pts.size() >= 2 ? richardson_extrapolate(pts) : kNaN;
  rep.rate = fitted_rate(rep.rows);
}

// Quantity display order inside a report list.
int quantity_rank(const std::string& q) {
  static const char* order[] = {"r_i^(2/(p-1))", "s_i^(2/(p-1))", "|u(s_i)|",
                                "p|u'(r_i)|r_i", "energy",        "rho_m",
                                "p|w'(rho_m)|rho_m", "delta_m",   "|w(delta_m)|"};
  for (int k = 0; k < static_cast<int>(std::size(order)); ++k) {
    if (q == order[k]) return k;
  }
  return 100;
}

}  // namespace

const char* to_string(Problem bc) {
  switch (bc) {
    case Problem::dirichlet:
      return "dirichlet";
    case Problem::neumann:
      return "neumann";
    case Problem::plane:
      return "plane";
  }
  return "?";
}

Problem parse_problem(const std::string& name) {
  if (name == "dirichlet") return Problem::dirichlet;
  if (name == "neumann") return Problem::neumann;
  if (name == "plane") return Problem::plane;
  throw DomainError(fmt::format("unknown boundary condition '{}'", name));
}

bool ConvergenceReport::monotone() const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].abs_err < rows[k - 1].abs_err)) return false;
  }
  return true;
}

double richardson_extrapolate(std::span<const std::pair<double, double>> rows) {
  if (rows.size() < 2) throw DomainError("richardson_extrapolate: need at least two rows");
  // value = L + c x with x = 1/p, least squares on centred data.
  const double n = static_cast<double>(rows.size());
  double xm = 0.0, ym = 0.0;
  for (const auto& [p, v] : rows) {
    xm += 1.0 / p;
    ym += v;
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [p, v] : rows) {
    sxx += (1.0 / p - xm) * (1.0 / p - xm);
    sxy += (1.0 / p - xm) * (v - ym);
  }
  if (!(sxx > 1e-28 * xm * xm)) {
    throw DomainError("richardson_extrapolate: degenerate fit (p values coincide)");
  }
  return ym - sxy / sxx * xm;
}

std::vector<ConvergenceReport> convergence_report(int m, double alpha, Problem bc,
                                                  std::span<const double> p_list,
                                                  const VerifyOptions& opt) {
  if (m < 1) throw DomainError("convergence_report: m must be >= 1");
  if (bc == Problem::neumann && m < 2) {
    throw DomainError("convergence_report: Neumann solutions need m >= 2");
  }
  if (!(alpha >= 0.0)) throw DomainError("convergence_report: alpha must be >= 0");
  validate_p_list(p_list);

  const auto table = constants::theta_sequence(m + 1);
  const int m_max = bc == Problem::plane ? m + 1 : m;

  auto work = [&, m_max](double p) -> Measurements {
    auto w = std::make_shared<const WholePlaneSolution>(
        radial::solve_whole_plane(p, alpha, m_max, opt.tol));
    switch (bc) {
      case Problem::dirichlet:
        return measure_dirichlet(radial::dirichlet_solution(w, m), table);
      case Problem::neumann:
        return measure_neumann(radial::neumann_solution(w, m), table);
      case Problem::plane:
        return measure_plane(*w, m, table);
    }
    return {};
  };
  const auto per_p = map_over_p(p_list, opt.parallel, work);

  std::vector<ConvergenceReport> out;
  for (const auto& [key, first] : per_p.front()) {
    ConvergenceReport rep;
    rep.quantity = key.first;
    rep.i = key.second;
    rep.bc = bc;
    rep.m = m;
    rep.alpha = alpha;
    for (std::size_t k = 0; k < p_list.size(); ++k) {
      const auto& [computed, limit] = per_p[k].at(key);
      rep.rows.push_back({p_list[k], computed, limit, std::abs(computed - limit)});
    }
    finish(rep);
    out.push_back(std::move(rep));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::make_pair(quantity_rank(a.quantity), a.i) <
           std::make_pair(quantity_rank(b.quantity), b.i);
  });
  return out;
}

double green_profile_check(const RadialSolution& sol, std::span<const double> radii) {
  if (sol.bc != radial::BoundaryCondition::dirichlet) {
    throw DomainError("green_profile_check applies to Dirichlet solutions");
  }
  const double gamma = constants::gamma_alpha_m(sol.alpha, sol.m);
  double worst = 0.0;
  for (const double r : radii) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("green_profile_check: radii must lie in (0, 1]");
    const double pu = sol.p * sol.u_at_log_radius(std::log(r));
    worst = std::max(worst, std::abs(pu - gamma * std::log(1.0 / r)));
  }
  return worst;
}

std::vector<double> default_green_radii(int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(0.2 + 0.8 * k / std::max(n - 1, 1));
  return out;
}

std::pair<double, double> default_bubble_interval(int i, double alpha) {
  if (i == 0) return {0.1, 4.0};
  const auto spec = bubbles::make_bubble(i, alpha);
  return {0.5 * spec.sigma_i_alpha, 4.0 * spec.sigma_i_alpha};
}

BubbleCheck bubble_convergence_check(const RadialSolution& sol, int i, double lo, double hi,
                                     int n) {
  if (!(lo > 0.0 && hi > lo)) {
    throw DomainError("bubble_convergence_check: need 0 < lo < hi");
  }
  if (n < 2) throw DomainError("bubble_convergence_check: need at least two points");
  std::vector<double> grid;
  for (int k = 0; k < n; ++k) grid.push_back(lo + (hi - lo) * k / (n - 1));
  const auto prof = radial::rescaled_profile(sol, i, grid);
  const auto spec = bubbles::make_bubble(i, sol.alpha);

  BubbleCheck out;
  for (const auto& s : prof.samples) {
    out.sup_err = std::max(out.sup_err, std::abs(s.xi - bubbles::bubble_profile(spec, s.r)));
  }
  out.r_over_eps = prof.r_lo;
  out.s_over_eps = prof.s_over_eps;
  out.sigma = spec.sigma_i_alpha;
  const auto iz = static_cast<std::size_t>(i);
  const double log_next = iz < sol.log_zeros.size() ? sol.log_zeros[iz] : 0.0;
  out.eps_over_next = std::exp(prof.log_eps - log_next);
  return out;
}

std::vector<ConvergenceReport> profile_reports(int m, double alpha,
                                               std::span<const double> p_list,
                                               const VerifyOptions& opt) {
  validate_p_list(p_list);
  struct PerP {
    double green;
    std::vector<double> xi;
  };
  auto work = [&](double p) {
    auto w = std::make_shared<const WholePlaneSolution>(
        radial::solve_whole_plane(p, alpha, m, opt.tol));
    const auto sol = radial::dirichlet_solution(w, m);
    PerP out{green_profile_check(sol, default_green_radii()), {}};
    for (int i = 0; i < m; ++i) {
      const auto [lo, hi] = default_bubble_interval(i, alpha);
      out.xi.push_back(bubble_convergence_check(sol, i, lo, hi).sup_err);
    }
    return out;
  };
  const auto per_p = map_over_p(p_list, opt.parallel, work);

  std::vector<ConvergenceReport> out;
  auto make = [&](const std::string& q, int i, auto get) {
    ConvergenceReport rep;
    rep.quantity = q;
    rep.i = i;
    rep.bc = Problem::dirichlet;
    rep.m = m;
    rep.alpha = alpha;
    for (std::size_t k = 0; k < p_list.size(); ++k) {
      const double v = get(per_p[k]);
      rep.rows.push_back({p_list[k], v, 0.0, std::abs(v)});
    }
    finish(rep);
    out.push_back(std::move(rep));
  };
  make("green_profile", m, [](const PerP& r) { return r.green; });
  for (int i = 0; i < m; ++i) {
    make("xi_sup_err", i, [i](const PerP& r) { return r.xi[static_cast<std::size_t>(i)]; });
  }
  return out;
}

std::vector<ConvergenceReport> run_sweep(const SweepConfig& config) {
  if (config.p.empty() || config.m.empty() || config.alpha.empty() || config.bc.empty()) {
    throw DomainError("sweep: p, m, alpha and bc must all be non-empty");
  }
  using Task = std::tuple<Problem, int, double>;
  std::vector<Task> tasks;
  for (const Problem bc : config.bc) {
    for (const int m : config.m) {
      for (const double alpha : config.alpha) {
        if (bc == Problem::neumann && m < 2) continue;
        tasks.emplace_back(bc, m, alpha);
      }
    }
  }
  VerifyOptions inner;
  inner.tol = config.tol;
  inner.parallel = false;  // each task is single-threaded

  std::vector<std::future<std::vector<ConvergenceReport>>> pending;
  for (const auto& [bc, m, alpha] : tasks) {
    pending.push_back(std::async(std::launch::async, [&, bc = bc, m = m, alpha = alpha] {
      return convergence_report(m, alpha, bc, config.p, inner);
    }));
  }
  std::vector<ConvergenceReport> out;
  for (auto& f : pending) {
    auto part = f.get();
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace nodal::verify
