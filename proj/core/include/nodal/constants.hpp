#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nodal::constants {

/// The Lambert-W sequence theta_k together with its reciprocal form A_k.
///
/// theta[k] for k = 0..k_max is produced by the direct iteration
///   theta_0 = 2,  theta_k = 2 + 2 / W( psi(theta_{k-1}) ),
///   psi(t) = 2/(2+t) * exp(-2/(2+t)),
/// while a_seq is produced independently by
///   A_1 = W( e^{-1/2} / 2 ),  A_{k+1} = W( phi(A_k) ),
///   phi(s) = s/(1+2s) * exp(-s/(1+2s)),
/// so that theta_k = 2 + 2 / A_k. a_seq[0] is unused (NaN).
struct ThetaTable {
  int k_max = 0;
  std::vector<double> theta;
  std::vector<double> a_seq;

  double a(int k) const { return a_seq.at(static_cast<std::size_t>(k)); }
  double operator[](int k) const { return theta.at(static_cast<std::size_t>(k)); }
};

ThetaTable theta_sequence(int k_max);

/// Sharp constants for the radial solution with m nodal regions.
///
/// Index conventions follow the natural ranges; entries outside a family's
/// range are NaN so that vectors can be indexed directly:
///   M[i], S[i] for i = 0..m-1;  R[i] for i = 1..m-1;  D[i] for i = 1..m.
struct ConstantTable {
  int m = 1;
  double alpha = 0.0;
  std::vector<double> theta;  // theta_0..theta_{m-1}
  std::vector<double> R;      // size m
  std::vector<double> S;      // size m
  std::vector<double> M;      // size m
  std::vector<double> D;      // size m + 1
};

/// Throws DomainError when m < 1 or alpha < 0.
ConstantTable constant_table(int m, double alpha = 0.0);
/// Same, reusing a precomputed theta table (requires table.k_max >= m - 1).
ConstantTable constant_table(const ThetaTable& table, int m, double alpha = 0.0);

/// Base constants of the recursion, index k >= 1.
double m_base(const ThetaTable& table, int k);  // M^{(k)}_{k-1}
double r_base(const ThetaTable& table, int k);  // R^{(k)}_{k-1}, k >= 2
double d_base(const ThetaTable& table, int k);  // D^{(k)}_k
double s_base(const ThetaTable& table, int k);  // S^{(k)}_{k-1}

/// M^{(m+1)}_0 from the closed product over theta_1..theta_m. The m = 0 case
/// returns sqrt(e), the base constant M^{(1)}_0.
double m0_product_formula(int m);
double m0_product_formula(const ThetaTable& table, int m);

/// Running values ln M^{(m+1)}_0 for m = 0..m_max using one pass over theta.
std::vector<double> log_m0_sequence(const ThetaTable& table, int m_max);

/// Neumann constants, same index conventions as ConstantTable:
///   Rbar[i], Dbar[i] for i = 1..m-1;  Sbar[i] for i = 1..m-2;  Mbar[i] for
///   i = 0..m-1.
struct NeumannConstantTable {
  int m = 2;
  std::vector<double> Rbar;
  std::vector<double> Dbar;
  std::vector<double> Sbar;
  std::vector<double> Mbar;
};

/// Throws DomainError for m < 2.
NeumannConstantTable neumann_constants(int m);
NeumannConstantTable neumann_constants(const ConstantTable& table);

struct WholePlaneLimits {
  double rho_lim = 0.0;    // lim rho_m^{2/(p-1)}
  double drv_lim = 0.0;    // lim p |w'(rho_m)| rho_m
  double delta_lim = 0.0;  // lim delta_m^{2/(p-1)}
  double val_lim = 0.0;    // lim |w(delta_m)|
};

WholePlaneLimits whole_plane_limits(int m, double alpha);
WholePlaneLimits whole_plane_limits(const ThetaTable& table, int m, double alpha);

enum class Boundary { dirichlet, neumann };

/// Limit of p * int |u'|^2 r dr (equal to the potential energy).
double energy_limit(int m, double alpha, Boundary bc);
double energy_limit(const ThetaTable& table, int m, double alpha, Boundary bc);

/// Coefficient of the Green function in the limit of p * u.
double gamma_alpha_m(double alpha, int m);

struct BoundsReport {
  int index = 0;
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  bool holds = false;
};

/// 2 + 8k < theta_k < 2 + 2/W(1/(4k)) < 4 + 8k together with
/// 1/(4k+1) < W(1/(4k)) < A_k < 1/(4k). lower/upper carry 2+8k and 4+8k.
BoundsReport theta_bounds_check(int k);
BoundsReport theta_bounds_check(const ThetaTable& table, int k);

/// Gamma-function sandwich for M^{(m+1)}_0 plus the sup-norm bounds of the
/// m-nodal Dirichlet and Neumann limits.
struct M0Bounds {
  BoundsReport sandwich;                  // value = M^{(m+1)}_0
  BoundsReport dirichlet;                 // value = M^{(m)}_0
  std::optional<BoundsReport> neumann;    // value = Mbar^{(m)}_0, m >= 2
  BoundsReport s_last;                    // e^{-1/(4m-2)} < S^{(m)}_{m-1} < e^{-1/(4m-1)}
  bool holds = false;
};

M0Bounds m0_bounds_check(int m);
/// log_m0 as produced by log_m0_sequence with size > m.
M0Bounds m0_bounds_check(const ThetaTable& table, const std::vector<double>& log_m0,
                         int m);

/// c1 = sqrt(pi), c2 = 6 Gamma(3/4) / Gamma(1/4).
double growth_c1();
double growth_c2();

/// Closed-form Morse index value 4m^2 - m - 2 (m >= 1).
std::int64_t morse_conjecture(int m);
/// 1 for k = 0, otherwise 1 + 2 floor(theta_k / 2) = 8k + 3.
std::int64_t bubble_morse(int k);

}  // namespace nodal::constants
