#pragma once

#include <span>
#include <vector>

namespace nodal::bubbles {

/// Parameters of the radial Liouville profile
///   Z(r) = log[ 2 theta^2 beta^theta r^{(a+2)(theta-2)/2}
///               / (beta^theta + r^{(a+2) theta/2})^2 ],
/// which solves -Delta Z = ((a+2)/2)^2 |x|^a e^Z + (a+2) pi (2-theta) delta_0
/// with mass 8 pi theta / (a+2). Index 0 is the regular bubble (theta = 2).
struct BubbleSpec {
  int i = 0;
  double alpha = 0.0;
  double theta_i = 2.0;
  double beta_i = 0.0;
  double sigma_i_alpha = 0.0;  // the positive zero of Z (0 for i = 0)

  /// theta * log(beta), the quantity actually used by the profile.
  double theta_log_beta() const;
};

/// Builds the spec for bubble i with weight exponent alpha (theta from the
/// Lambert-W sequence). Throws DomainError for i < 0 or alpha < 0.
BubbleSpec make_bubble(int i, double alpha);
/// Same, for an arbitrary theta >= 2 (theta = 2 selects the regular bubble).
BubbleSpec make_bubble_from_theta(int i, double theta, double alpha);

/// Z_{i,alpha}(r). r = 0 gives 0 for i = 0 and -infinity for i >= 1.
double bubble_profile(const BubbleSpec& spec, double r);

/// dZ/dr in closed form (r > 0).
double bubble_profile_derivative(const BubbleSpec& spec, double r);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// 2 pi int_0^inf e^Z r^{1+alpha} dr by adaptive Gauss-Kronrod; the tail past
/// the split point is mapped onto (0, 1] with s = split / u.
QuadratureResult bubble_mass(const BubbleSpec& spec, double rel_tol = 1e-12);

/// Closed form 8 pi theta / (alpha + 2).
double bubble_mass_exact(const BubbleSpec& spec);

struct SplitIntegrals {
  QuadratureResult inner;  // int_0^sigma e^Z s ds      (= theta - 2)
  QuadratureResult outer;  // int_sigma^inf e^Z s ds    (= theta + 2)
};

/// Requires alpha = 0 and i >= 1.
SplitIntegrals bubble_split_integrals(const BubbleSpec& spec, double rel_tol = 1e-12);

/// max over grid of |Z'' + Z'/r + ((a+2)/2)^2 r^a e^Z| with centred
/// differences of step h. Grid points must satisfy r > h.
double bubble_pde_residual(const BubbleSpec& spec, std::span<const double> r_grid,
                           double h);

struct ProfileSample {
  double r;
  double z;
  double exp_z;
};

/// n samples on [r_min, r_max], uniformly spaced.
std::vector<ProfileSample> sample_profile(const BubbleSpec& spec, double r_min,
                                          double r_max, int n);

}  // namespace nodal::bubbles
