#include "nodal/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "nodal/errors.hpp"
#include "nodal/specfun.hpp"

namespace nodal::constants {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Above this many nodal regions the R-products are accumulated as log sums.
constexpr int kLogProductThreshold = 50;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_table(const ThetaTable& table, int k) {
  if (k > table.k_max) {
    throw DomainError(
        fmt::format("theta table holds k <= {}, index {} requested", table.k_max, k));
  }
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError(fmt::format("alpha must be finite and >= 0, got {}", alpha));
  }
}

}  // namespace

ThetaTable theta_sequence(int k_max) {
  if (k_max < 0) throw DomainError("theta_sequence: k_max must be >= 0");
  ThetaTable out;
  out.k_max = k_max;
  const auto n = static_cast<std::size_t>(k_max) + 1;
  out.theta.resize(n);
  out.a_seq.assign(n, kNaN);

  out.theta[0] = 2.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double y = 2.0 / (2.0 + out.theta[k - 1]);
    out.theta[k] = 2.0 / specfun::lambert_w0(y * std::exp(-y)) + 2.0;
  }

  if (n > 1) {
    out.a_seq[1] = specfun::lambert_w0(0.5 * std::exp(-0.5));
    for (std::size_t k = 2; k < n; ++k) {
      const double s = out.a_seq[k - 1];
      const double q = s / (1.0 + 2.0 * s);
      out.a_seq[k] = specfun::lambert_w0(q * std::exp(-q));
    }
  }
  return out;
}

double m_base(const ThetaTable& table, int k) {
  require_table(table, k - 1);
  return std::exp(2.0 / (2.0 + table[k - 1]));
}

double r_base(const ThetaTable& table, int k) {
  if (k < 2) throw DomainError("R^{(k)}_{k-1} is defined for k >= 2");
  return m_base(table, k - 1) * (table[k - 2] + 2.0) /
         (m_base(table, k) * (table[k - 1] - 2.0));
}

double d_base(const ThetaTable& table, int k) {
  return m_base(table, k) * (table[k - 1] + 2.0);
}

double s_base(const ThetaTable& table, int k) {
  if (k < 1) throw DomainError("S^{(k)}_{k-1} is defined for k >= 1");
  return k == 1 ? 0.0 : 1.0 / m_base(table, k);
}

ConstantTable constant_table(int m, double alpha) {
  if (m < 1) throw DomainError(fmt::format("constant_table: m = {} must be >= 1", m));
  return constant_table(theta_sequence(m), m, alpha);
}

ConstantTable constant_table(const ThetaTable& table, int m, double alpha) {
  if (m < 1) throw DomainError(fmt::format("constant_table: m = {} must be >= 1", m));
  require_alpha(alpha);
  require_table(table, m - 1);

  ConstantTable out;
  out.m = m;
  out.alpha = alpha;
  const auto mz = static_cast<std::size_t>(m);
  out.theta.assign(table.theta.begin(), table.theta.begin() + m);
  out.R.assign(mz, kNaN);
  out.S.assign(mz, kNaN);
  out.M.assign(mz, kNaN);
  out.D.assign(mz + 1, kNaN);

  // tail[j] = prod_{k=j}^{m} R^{(k)}_{k-1} for j = 2..m+1 (empty product = 1),
  // kept either directly or as a log sum.
  const bool use_log = m > kLogProductThreshold;
  std::vector<double> tail(mz + 2, use_log ? 0.0 : 1.0);
  for (int j = m; j >= 2; --j) {
    const double rb = r_base(table, j);
    const auto jz = static_cast<std::size_t>(j);
    tail[jz] = use_log ? tail[jz + 1] + std::log(rb) : tail[jz + 1] * rb;
  }
  auto tail_product = [&](int j) {
    const double t = tail[static_cast<std::size_t>(j)];
    return use_log ? std::exp(t) : t;
  };
  // Ratio base / prod_{k=j}^m R, formed in log space when requested.
  auto divide_by_tail = [&](double base, int j) {
    const double t = tail[static_cast<std::size_t>(j)];
    return use_log ? std::exp(std::log(base) - t) : base / t;
  };

  for (int i = 1; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    out.R[iz] = tail_product(i + 1);
    out.D[iz] = divide_by_tail(d_base(table, i), i + 1);
  }
  out.D[mz] = d_base(table, m);

  for (int i = 0; i <= m - 1; ++i) {
    const auto iz = static_cast<std::size_t>(i);
    const double sb = s_base(table, i + 1);
    out.S[iz] = sb == 0.0 ? 0.0
                          : (use_log ? std::exp(std::log(sb) + tail[iz + 2])
                                     : sb * tail_product(i + 2));
    out.M[iz] = divide_by_tail(m_base(table, i + 1), i + 2);
  }
  return out;
}

double m0_product_formula(int m) {
  if (m < 0) throw DomainError("m0_product_formula: m must be >= 0");
  return m0_product_formula(theta_sequence(m), m);
}

double m0_product_formula(const ThetaTable& table, int m) {
  if (m < 0) throw DomainError("m0_product_formula: m must be >= 0");
  if (m == 0) return std::exp(0.5);
  require_table(table, m);
  CompensatedSum log_prod;
  for (int k = 1; k <= m - 1; ++k) {
    log_prod.add(std::log1p(-4.0 / (table[k] + 2.0)));
  }
  log_prod.add(std::log((table[m] - 2.0) / 4.0));
  log_prod.add(2.0 / (2.0 + table[m]));
  return std::exp(log_prod.value());
}

std::vector<double> log_m0_sequence(const ThetaTable& table, int m_max) {
  require_table(table, m_max);
  std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
  out[0] = 0.5;
  CompensatedSum prefix;  // sum_{k=1}^{m-1} log((theta_k - 2)/(theta_k + 2))
  for (int m = 1; m <= m_max; ++m) {
    if (m >= 2) prefix.add(std::log1p(-4.0 / (table[m - 1] + 2.0)));
    out[static_cast<std::size_t>(m)] =
        prefix.value() + std::log((table[m] - 2.0) / 4.0) + 2.0 / (2.0 + table[m]);
  }
  return out;
}

NeumannConstantTable neumann_constants(int m) {
  if (m < 2) throw DomainError(fmt::format("neumann_constants: m = {} must be >= 2", m));
  return neumann_constants(constant_table(m));
}

NeumannConstantTable neumann_constants(const ConstantTable& table) {
  const int m = table.m;
  if (m < 2) throw DomainError(fmt::format("neumann_constants: m = {} must be >= 2", m));
  const auto mz = static_cast<std::size_t>(m);
  const double s_last = table.S[mz - 1];

  NeumannConstantTable out;
  out.m = m;
  out.Rbar.assign(mz, kNaN);
  out.Dbar.assign(mz, kNaN);
  out.Sbar.assign(mz, kNaN);
  out.Mbar.assign(mz, kNaN);
  for (std::size_t i = 1; i <= mz - 1; ++i) {
    out.Rbar[i] = table.R[i] / s_last;
    out.Dbar[i] = s_last * table.D[i];
  }
  for (std::size_t i = 1; i + 2 <= mz; ++i) out.Sbar[i] = table.S[i] / s_last;
  for (std::size_t i = 0; i < mz; ++i) out.Mbar[i] = s_last * table.M[i];
  return out;
}

WholePlaneLimits whole_plane_limits(int m, double alpha) {
  if (m < 1) throw DomainError("whole_plane_limits: m must be >= 1");
  return whole_plane_limits(theta_sequence(m), m, alpha);
}

WholePlaneLimits whole_plane_limits(const ThetaTable& table, int m, double alpha) {
  if (m < 1) throw DomainError("whole_plane_limits: m must be >= 1");
  require_alpha(alpha);
  const ConstantTable cur = constant_table(table, m, alpha);
  const ConstantTable next = constant_table(table, m + 1, alpha);
  const double power = 2.0 / (alpha + 2.0);
  const auto mz = static_cast<std::size_t>(m);

  WholePlaneLimits out;
  out.rho_lim = std::pow(cur.M[0], power);
  out.drv_lim = 0.5 * (alpha + 2.0) * cur.D[mz] / cur.M[0];
  out.delta_lim = std::pow(next.M[0] * next.S[mz], power);
  out.val_lim = next.M[mz] / next.M[0];
  return out;
}

double energy_limit(int m, double alpha, Boundary bc) {
  return energy_limit(theta_sequence(std::max(m, 1)), m, alpha, bc);
}

double energy_limit(const ThetaTable& table, int m, double alpha, Boundary bc) {
  require_alpha(alpha);
  if (m < 1) throw DomainError("energy_limit: m must be >= 1");
  if (bc == Boundary::neumann && m < 2) {
    throw DomainError("energy_limit: Neumann solutions need m >= 2 nodal regions");
  }
  const double th = table[m - 1];
  if (bc == Boundary::dirichlet) {
    const double mb = m_base(table, m);
    return (alpha + 2.0) / 8.0 * mb * mb * (th + 2.0) * (th + 2.0);
  }
  return (alpha + 2.0) / 8.0 * (th + 2.0) * (th - 2.0);
}

double gamma_alpha_m(double alpha, int m) {
  require_alpha(alpha);
  if (m < 1) throw DomainError("gamma_alpha_m: m must be >= 1");
  const ThetaTable table = theta_sequence(m);
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  return sign * 0.5 * (alpha + 2.0) * d_base(table, m);
}

BoundsReport theta_bounds_check(int k) {
  if (k < 1) throw DomainError("theta_bounds_check: k must be >= 1");
  return theta_bounds_check(theta_sequence(k), k);
}

BoundsReport theta_bounds_check(const ThetaTable& table, int k) {
  if (k < 1) throw DomainError("theta_bounds_check: k must be >= 1");
  require_table(table, k);
  const double kd = static_cast<double>(k);
  const double w_quarter = specfun::lambert_w0(1.0 / (4.0 * kd));
  const double mid = 2.0 + 2.0 / w_quarter;

  BoundsReport out;
  out.index = k;
  out.lower = 2.0 + 8.0 * kd;
  out.value = table[k];
  out.upper = 4.0 + 8.0 * kd;
  const double ak = table.a(k);
  out.holds = out.lower < out.value && out.value < mid && mid < out.upper &&
              1.0 / (4.0 * kd + 1.0) < w_quarter && w_quarter < ak &&
              ak < 1.0 / (4.0 * kd);
  return out;
}

double growth_c1() { return std::sqrt(std::numbers::pi); }

double growth_c2() {
  return 6.0 * std::exp(specfun::ln_gamma(0.75) - specfun::ln_gamma(0.25));
}

M0Bounds m0_bounds_check(int m) {
  if (m < 1) throw DomainError("m0_bounds_check: m must be >= 1");
  const ThetaTable table = theta_sequence(m);
  return m0_bounds_check(table, log_m0_sequence(table, m), m);
}

M0Bounds m0_bounds_check(const ThetaTable& table, const std::vector<double>& log_m0,
                         int m) {
  if (m < 1) throw DomainError("m0_bounds_check: m must be >= 1");
  require_table(table, m);
  if (log_m0.size() <= static_cast<std::size_t>(m)) {
    throw DomainError("m0_bounds_check: log_m0 sequence too short");
  }
  using specfun::ln_gamma_ratio;
  const double md = static_cast<double>(m);
  const double c1 = growth_c1();
  const double c2 = growth_c2();
  auto finish = [](BoundsReport& r) { r.holds = r.lower < r.value && r.value < r.upper; };

  M0Bounds out;
  out.sandwich.index = m;
  out.sandwich.value = std::exp(log_m0[static_cast<std::size_t>(m)]);
  out.sandwich.lower = c1 * std::exp(ln_gamma_ratio(md, 1.0, 0.5) + 1.0 / (3.0 + 4.0 * md));
  out.sandwich.upper = c2 * std::exp(ln_gamma_ratio(md, 1.25, 0.75) + 1.0 / (2.0 + 4.0 * md));
  finish(out.sandwich);

  // Sup-norm limit of the m-nodal Dirichlet solution is M^{(m)}_0.
  const double m0_cur = std::exp(log_m0[static_cast<std::size_t>(m - 1)]);
  const double d_lower = c1 * std::exp(ln_gamma_ratio(md, 0.0, -0.5));
  const double d_upper = c2 * std::exp(ln_gamma_ratio(md, 0.25, -0.25));
  out.dirichlet.index = m;
  out.dirichlet.value = m0_cur;
  out.dirichlet.lower = d_lower * std::exp(1.0 / (4.0 * md - 1.0));
  out.dirichlet.upper = d_upper * std::exp(1.0 / (4.0 * md - 2.0));
  finish(out.dirichlet);

  out.holds = out.sandwich.holds && out.dirichlet.holds;
  if (m >= 2) {
    const double s_last = s_base(table, m);
    BoundsReport nb;
    nb.index = m;
    nb.value = s_last * m0_cur;
    nb.lower = d_lower * std::exp(1.0 / (4.0 * md - 1.0) - 1.0 / (4.0 * md - 2.0));
    nb.upper = d_upper * std::exp(1.0 / (4.0 * md - 2.0) - 1.0 / (4.0 * md - 1.0));
    finish(nb);
    out.neumann = nb;

    out.s_last.index = m;
    out.s_last.value = s_last;
    out.s_last.lower = std::exp(-1.0 / (4.0 * md - 2.0));
    out.s_last.upper = std::exp(-1.0 / (4.0 * md - 1.0));
    finish(out.s_last);
    out.holds = out.holds && nb.holds && out.s_last.holds;
  } else {
    // S^{(1)}_0 = 0: no sandwich applies.
    out.s_last.index = 1;
    out.s_last.holds = true;
  }
  return out;
}

std::int64_t morse_conjecture(int m) {
  if (m < 1) throw DomainError("morse_conjecture: m must be >= 1");
  const auto mm = static_cast<std::int64_t>(m);
  return 4 * mm * mm - mm - 2;
}

std::int64_t bubble_morse(int k) {
  if (k < 0) throw DomainError("bubble_morse: k must be >= 0");
  if (k == 0) return 1;
  const ThetaTable table = theta_sequence(k);
  return 1 + 2 * static_cast<std::int64_t>(std::floor(table[k] / 2.0));
}

}  // namespace nodal::constants
