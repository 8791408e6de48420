#include "nodal/report_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "nodal/errors.hpp"

namespace nodal::io {

using nlohmann::json;

std::string fmt_param(double x) {
  if (!std::isfinite(x)) return {};
  return fmt::format("{:.6g}", x);
}

std::string fmt_full(double x) {
  if (!std::isfinite(x)) return {};
  return fmt::format("{:.17g}", x);
}

json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

namespace {

json json_array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

double at_or_nan(const std::vector<double>& v, int k) {
  if (k < 0 || k >= static_cast<int>(v.size())) return std::nan("");
  return v[static_cast<std::size_t>(k)];
}

void check_constants_args(int n, double alpha) {
  if (n < 1) throw DomainError("constants: m must be >= 1");
  if (!(alpha >= 0.0)) throw DomainError("constants: alpha must be >= 0");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  return out;
}

double parse_real(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw DomainError(fmt::format("not a number: '{}'", tok));
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw DomainError(fmt::format("not a number: '{}'", tok));
  }
  return v;
}

int parse_int(const std::string& tok) {
  const double v = parse_real(tok);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw DomainError(fmt::format("not an integer: '{}'", tok));
  }
  return static_cast<int>(v);
}

}  // namespace

void write_constants_csv(std::ostream& out, int n, double alpha) {
  check_constants_args(n, alpha);
  const auto table = constants::theta_sequence(n);
  const auto log_m0 = constants::log_m0_sequence(table, n);
  const auto ct = constants::constant_table(table, n, alpha);
  std::optional<constants::NeumannConstantTable> nt;
  if (n >= 2) nt = constants::neumann_constants(ct);

  out << "k,theta_k,M0_k,M0_k/sqrt(k),M_k-1,S_k-1,R_k,D_k,Mbar_k-1,Sbar_k-1,Rbar_k,Dbar_k,"
         "rho_lim,drv_lim,delta_lim,val_lim\n";
  for (int k = 1; k <= n; ++k) {
    const double m0 = std::exp(log_m0[static_cast<std::size_t>(k - 1)]);
    const auto wp = constants::whole_plane_limits(table, k, alpha);
    const double nan = std::nan("");
    const double mbar = nt ? at_or_nan(nt->Mbar, k - 1) : nan;
    const double sbar = nt ? at_or_nan(nt->Sbar, k - 1) : nan;
    const double rbar = nt ? at_or_nan(nt->Rbar, k) : nan;
    const double dbar = nt ? at_or_nan(nt->Dbar, k) : nan;
    out << k << ',' << fmt_full(table[k]) << ',' << fmt_full(m0) << ','
        << fmt_full(m0 / std::sqrt(static_cast<double>(k))) << ','
        << fmt_full(at_or_nan(ct.M, k - 1)) << ',' << fmt_full(at_or_nan(ct.S, k - 1)) << ','
        << fmt_full(at_or_nan(ct.R, k)) << ',' << fmt_full(at_or_nan(ct.D, k)) << ','
        << fmt_full(mbar) << ',' << fmt_full(sbar) << ',' << fmt_full(rbar) << ','
        << fmt_full(dbar) << ',' << fmt_full(wp.rho_lim) << ',' << fmt_full(wp.drv_lim) << ','
        << fmt_full(wp.delta_lim) << ',' << fmt_full(wp.val_lim) << '\n';
  }
}

json constants_json(int n, double alpha) {
  check_constants_args(n, alpha);
  const auto table = constants::theta_sequence(n);
  const auto log_m0 = constants::log_m0_sequence(table, n);
  const auto ct = constants::constant_table(table, n, alpha);

  json out;
  out["m"] = n;
  out["alpha"] = alpha;
  out["theta"] = json_array(table.theta);
  std::vector<double> m0;
  for (int k = 0; k < n; ++k) m0.push_back(std::exp(log_m0[static_cast<std::size_t>(k)]));
  out["M0"] = json_array(m0);  // M^{(k)}_0, k = 1..n
  out["dirichlet"] = {{"R", json_array(ct.R)},
                      {"S", json_array(ct.S)},
                      {"M", json_array(ct.M)},
                      {"D", json_array(ct.D)},
                      {"energy", json_number(constants::energy_limit(
                                     table, n, alpha, constants::Boundary::dirichlet))},
                      {"gamma", json_number(constants::gamma_alpha_m(alpha, n))}};
  if (n >= 2) {
    const auto nt = constants::neumann_constants(ct);
    out["neumann"] = {{"Rbar", json_array(nt.Rbar)},
                      {"Sbar", json_array(nt.Sbar)},
                      {"Mbar", json_array(nt.Mbar)},
                      {"Dbar", json_array(nt.Dbar)},
                      {"energy", json_number(constants::energy_limit(
                                     table, n, alpha, constants::Boundary::neumann))}};
  } else {
    out["neumann"] = nullptr;
  }
  json plane = json::array();
  for (int k = 1; k <= n; ++k) {
    const auto wp = constants::whole_plane_limits(table, k, alpha);
    plane.push_back({{"m", k},
                     {"rho_lim", json_number(wp.rho_lim)},
                     {"drv_lim", json_number(wp.drv_lim)},
                     {"delta_lim", json_number(wp.delta_lim)},
                     {"val_lim", json_number(wp.val_lim)}});
  }
  out["whole_plane"] = std::move(plane);
  return out;
}

namespace {

struct BoundsRow {
  std::string check;
  constants::BoundsReport rep;
};

std::vector<BoundsRow> bounds_rows(int k_max, int m_max) {
  if (k_max < 1 || m_max < 1) throw DomainError("bounds: kmax and mmax must be >= 1");
  const auto table = constants::theta_sequence(std::max(k_max, m_max + 1));
  std::vector<BoundsRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    rows.push_back({"theta", constants::theta_bounds_check(table, k)});
    const double half = std::floor(table[k] / 2.0);
    const double want = 4.0 * k + 1.0;
    rows.push_back({"theta_floor", {k, want, half, want, half == want}});
  }
  const auto log_m0 = constants::log_m0_sequence(table, m_max + 1);
  std::int64_t morse_sum = 0;
  for (int m = 1; m <= m_max; ++m) {
    const auto b = constants::m0_bounds_check(table, log_m0, m);
    rows.push_back({"m0_sandwich", b.sandwich});
    rows.push_back({"m0_dirichlet", b.dirichlet});
    if (b.neumann) rows.push_back({"m0_neumann", *b.neumann});
    if (m >= 2) rows.push_back({"s_last", b.s_last});
    morse_sum += constants::bubble_morse(m - 1);
    const auto want = static_cast<double>(constants::morse_conjecture(m));
    const auto got = static_cast<double>(morse_sum);
    rows.push_back({"morse", {m, want, got, want, got == want}});
  }
  return rows;
}

}  // namespace

void write_bounds_csv(std::ostream& out, int k_max, int m_max) {
  out << "check,index,lower,value,upper,holds\n";
  for (const auto& r : bounds_rows(k_max, m_max)) {
    out << r.check << ',' << r.rep.index << ',' << fmt_full(r.rep.lower) << ','
        << fmt_full(r.rep.value) << ',' << fmt_full(r.rep.upper) << ','
        << (r.rep.holds ? "true" : "false") << '\n';
  }
}

json bounds_json(int k_max, int m_max) {
  json checks = json::array();
  bool all = true;
  for (const auto& r : bounds_rows(k_max, m_max)) {
    all = all && r.rep.holds;
    checks.push_back({{"check", r.check},
                      {"index", r.rep.index},
                      {"lower", json_number(r.rep.lower)},
                      {"value", json_number(r.rep.value)},
                      {"upper", json_number(r.rep.upper)},
                      {"holds", r.rep.holds}});
  }
  return {{"kmax", k_max}, {"mmax", m_max}, {"all_hold", all}, {"checks", std::move(checks)}};
}

SolveResult solve(double p, double alpha, int m, verify::Problem bc, double tol) {
  if (!(p > 1.0)) throw DomainError("p must be > 1");
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  if (m < 1) throw DomainError("m must be >= 1");
  if (bc == verify::Problem::neumann && m < 2) {
    throw DomainError("Neumann solutions need m >= 2");
  }
  SolveResult out;
  out.bc = bc;
  out.m = m;
  out.whole = std::make_shared<const radial::WholePlaneSolution>(
      radial::solve_whole_plane(p, alpha, m, tol));
  if (bc == verify::Problem::dirichlet) out.bounded = radial::dirichlet_solution(out.whole, m);
  if (bc == verify::Problem::neumann) out.bounded = radial::neumann_solution(out.whole, m);
  return out;
}

namespace {

struct SolutionSample {
  double log_r;
  double u;
};

std::vector<SolutionSample> solution_samples(const SolveResult& s, int n) {
  std::vector<SolutionSample> out;
  if (n <= 0) return out;
  if (n == 1) throw DomainError("samples must be >= 2");
  if (s.bounded) {
    for (int k = 0; k < n; ++k) {
      const double r = static_cast<double>(k) / (n - 1);
      const double x = r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity();
      out.push_back({x, s.bounded->u_at_log_radius(x)});
    }
  } else {
    const double lo = s.whole->t_start();
    const double hi = s.whole->zero_events().back().t;
    for (int k = 0; k < n; ++k) {
      const double t = lo + (hi - lo) * k / (n - 1);
      out.push_back({t, s.whole->u_at(t)});
    }
  }
  return out;
}

}  // namespace

json solution_json(const SolveResult& s, int samples) {
  json out;
  out["p"] = s.whole->p();
  out["alpha"] = s.whole->alpha();
  out["bc"] = verify::to_string(s.bc);
  out["m"] = s.m;
  out["tol"] = s.whole->tol();
  if (s.bounded) {
    const auto& b = *s.bounded;
    out["log_zeros"] = json_array(b.log_zeros);
    out["log_crit"] = json_array(b.log_crit);
    out["crit_values"] = json_array(b.crit_values);
    out["zero_slopes"] = json_array(b.zero_slopes);
    out["boundary_derivative"] = json_number(b.boundary_derivative);
    out["boundary_value"] = json_number(b.boundary_value);
    out["energy_grad"] = json_number(b.energy_grad);
    out["energy_pot"] = json_number(b.energy_pot);
    out["log_scale"] = json_number(b.log_scale);
  } else {
    out["log_zeros"] = json_array(s.whole->log_zeros());
    out["log_crit"] = json_array(s.whole->log_crit());
    out["crit_values"] = json_array(s.whole->crit_values());
    out["boundary_derivative"] = nullptr;
    out["energy_grad"] = nullptr;
    out["energy_pot"] = nullptr;
  }
  const auto& st = s.whole->stats();
  out["steps"] = {{"accepted", st.accepted}, {"rejected", st.rejected},
                  {"evaluations", st.evaluations}};
  if (samples > 0) {
    json log_r = json::array(), u = json::array();
    for (const auto& smp : solution_samples(s, samples)) {
      log_r.push_back(json_number(smp.log_r));
      u.push_back(json_number(smp.u));
    }
    out["samples"] = {{"log_r", std::move(log_r)}, {"u", std::move(u)}};
  }
  return out;
}

void write_solution_csv(std::ostream& out, const SolveResult& s, int samples) {
  if (samples > 0) {
    out << "log_r,r,u\n";
    for (const auto& smp : solution_samples(s, samples)) {
      const std::string log_r = std::isfinite(smp.log_r) ? fmt_full(smp.log_r) : "-inf";
      out << log_r << ',' << fmt_full(std::exp(smp.log_r)) << ',' << fmt_full(smp.u) << '\n';
    }
    return;
  }
  out << "quantity,i,value\n";
  auto list = [&](const char* name, const std::vector<double>& v, int first) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      out << name << ',' << first + static_cast<int>(k) << ',' << fmt_full(v[k]) << '\n';
    }
  };
  if (s.bounded) {
    const auto& b = *s.bounded;
    list("log_zero", b.log_zeros, 1);
    list("log_crit", b.log_crit, 1);
    list("crit_value", b.crit_values, 0);
    list("zero_slope", b.zero_slopes, 1);
    out << "boundary_derivative,," << fmt_full(b.boundary_derivative) << '\n';
    out << "energy_grad,," << fmt_full(b.energy_grad) << '\n';
    out << "energy_pot,," << fmt_full(b.energy_pot) << '\n';
  } else {
    list("log_zero", s.whole->log_zeros(), 1);
    list("log_crit", s.whole->log_crit(), 1);
    list("crit_value", s.whole->crit_values(), 0);
  }
}

void write_convergence_csv(std::ostream& out,
                           const std::vector<verify::ConvergenceReport>& reps) {
  out << "quantity,bc,m,alpha,i,p,computed,limit,abs_err\n";
  for (const auto& rep : reps) {
    for (const auto& row : rep.rows) {
      out << rep.quantity << ',' << verify::to_string(rep.bc) << ',' << rep.m << ','
          << fmt_param(rep.alpha) << ',' << rep.i << ',' << fmt_param(row.p) << ','
          << fmt_full(row.computed) << ',' << fmt_full(row.limit) << ','
          << fmt_full(row.abs_err) << '\n';
    }
  }
}

json convergence_json(const std::vector<verify::ConvergenceReport>& reps, double tol) {
  json list = json::array();
  for (const auto& rep : reps) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"p", row.p},
                      {"computed", json_number(row.computed)},
                      {"limit", json_number(row.limit)},
                      {"abs_err", json_number(row.abs_err)}});
    }
    const double limit = rep.rows.empty() ? std::nan("") : rep.rows.back().limit;
    const double rel =
        limit != 0.0 ? std::abs(rep.extrapolated - limit) / std::abs(limit) : std::nan("");
    list.push_back({{"quantity", rep.quantity},
                    {"bc", verify::to_string(rep.bc)},
                    {"m", rep.m},
                    {"alpha", rep.alpha},
                    {"i", rep.i},
                    {"rows", std::move(rows)},
                    {"monotone", rep.monotone()},
                    {"extrapolation",
                     {{"model", "L + c/p"},
                      {"value", json_number(rep.extrapolated)},
                      {"limit", json_number(limit)},
                      {"rel_err", json_number(rel)},
                      {"rate", json_number(rep.rate)}}}});
  }
  return {{"tol", tol},
          {"note", "rates are fitted, not asserted; tolerances are engineering choices"},
          {"reports", std::move(list)}};
}

BubbleChecks bubble_checks(const bubbles::BubbleSpec& spec) {
  BubbleChecks out;
  out.spec = spec;
  out.mass = bubbles::bubble_mass(spec);
  out.mass_exact = bubbles::bubble_mass_exact(spec);
  if (spec.alpha == 0.0 && spec.i >= 1) out.split = bubbles::bubble_split_integrals(spec);
  return out;
}

void write_bubble_csv(std::ostream& out, const std::vector<bubbles::ProfileSample>& samples) {
  out << "r,Z,exp_Z\n";
  for (const auto& s : samples) {
    const std::string z = std::isfinite(s.z) ? fmt_full(s.z) : "-inf";
    out << fmt_full(s.r) << ',' << z << ',' << fmt_full(s.exp_z) << '\n';
  }
}

json bubble_json(const BubbleChecks& c, const std::vector<bubbles::ProfileSample>& samples) {
  json r = json::array(), z = json::array(), ez = json::array();
  for (const auto& s : samples) {
    r.push_back(json_number(s.r));
    z.push_back(json_number(s.z));
    ez.push_back(json_number(s.exp_z));
  }
  json out;
  out["i"] = c.spec.i;
  out["alpha"] = c.spec.alpha;
  out["theta"] = c.spec.theta_i;
  out["beta"] = json_number(c.spec.beta_i);
  out["sigma"] = json_number(c.spec.sigma_i_alpha);
  out["mass"] = {{"value", c.mass.value},
                 {"error_estimate", c.mass.error_estimate},
                 {"exact", c.mass_exact}};
  if (c.split) {
    out["split"] = {{"inner", c.split->inner.value},
                    {"inner_exact", c.spec.theta_i - 2.0},
                    {"outer", c.split->outer.value},
                    {"outer_exact", c.spec.theta_i + 2.0}};
  } else {
    out["split"] = nullptr;
  }
  out["samples"] = {{"r", std::move(r)}, {"Z", std::move(z)}, {"exp_Z", std::move(ez)}};
  return out;
}

void write_bubble_summary(std::ostream& out, const BubbleChecks& c) {
  out << fmt::format("bubble i={} alpha={} theta={:.17g} sigma={:.17g}\n", c.spec.i,
                     fmt_param(c.spec.alpha), c.spec.theta_i, c.spec.sigma_i_alpha);
  out << fmt::format("mass {:.17g} exact {:.17g} rel_err {:.3e}\n", c.mass.value, c.mass_exact,
                     std::abs(c.mass.value - c.mass_exact) / c.mass_exact);
  if (c.split) {
    out << fmt::format("split inner {:.17g} (theta-2 = {:.17g}) outer {:.17g} (theta+2 = {:.17g})\n",
                       c.split->inner.value, c.spec.theta_i - 2.0, c.split->outer.value,
                       c.spec.theta_i + 2.0);
  }
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_commas(text)) {
    if (tok.empty()) throw DomainError(fmt::format("empty entry in list '{}'", text));
    out.push_back(parse_real(tok));
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

verify::SweepConfig parse_sweep_config(std::istream& in, double default_tol) {
  verify::SweepConfig cfg;
  cfg.tol = default_tol;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(fmt::format("sweep config line {}: expected 'key = values'", lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "p") {
        cfg.p = parse_real_list(value);
      } else if (key == "alpha") {
        cfg.alpha = parse_real_list(value);
      } else if (key == "tol") {
        cfg.tol = parse_real(value);
        if (!(cfg.tol > 0.0)) throw DomainError("tol must be > 0");
      } else if (key == "m") {
        cfg.m.clear();
        for (const auto& tok : split_commas(value)) {
          if (const auto dots = tok.find(".."); dots != std::string::npos) {
            const int a = parse_int(trim(tok.substr(0, dots)));
            const int b = parse_int(trim(tok.substr(dots + 2)));
            if (b < a) throw DomainError(fmt::format("empty range '{}'", tok));
            for (int v = a; v <= b; ++v) cfg.m.push_back(v);
          } else {
            cfg.m.push_back(parse_int(tok));
          }
        }
      } else if (key == "bc") {
        cfg.bc.clear();
        for (const auto& tok : split_commas(value)) cfg.bc.push_back(verify::parse_problem(tok));
      } else {
        throw DomainError(fmt::format("unknown key '{}'", key));
      }
    } catch (const DomainError& e) {
      throw DomainError(fmt::format("sweep config line {}: {}", lineno, e.what()));
    }
  }
  if (cfg.p.empty() || cfg.m.empty() || cfg.alpha.empty() || cfg.bc.empty()) {
    throw DomainError("sweep config must set p, m, alpha and bc");
  }
  for (int m : cfg.m) {
    if (m < 1) throw DomainError("sweep config: m must be >= 1");
  }
  for (double a : cfg.alpha) {
    if (!(a >= 0.0)) throw DomainError("sweep config: alpha must be >= 0");
  }
  return cfg;
}

}  // namespace nodal::io
