#pragma once

// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with the Hairer-Wanner
// continuous extension and PI step-size control.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "nodal/errors.hpp"

namespace nodal::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step together with its quartic dense-output polynomial.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> rcont{};

  double t1() const { return t0 + h; }

  double component(std::size_t i, double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    const auto& r = rcont;
    return r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
  }

  State<N> operator()(double t) const {
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i) y[i] = component(i, t);
    return y;
  }
};

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_max = 0.25;
  long max_steps = 2'000'000;
};

struct Dopri5Stats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

/// Integrates y' = f(t, y) from (t0, y0) until t_end or until the observer
/// returns false. The observer is called with every accepted DenseStep.
/// Throws NumericalError if the step size collapses or max_steps is exceeded.
template <std::size_t N, class Rhs, class Observer>
Dopri5Stats integrate_dopri5(Rhs&& f, double t0, State<N> y0, double t_end,
                             const Dopri5Options& opt, Observer&& observe) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  // PI controller constants (Hairer-Wanner DOPRI5 defaults).
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9;
  constexpr double fac_min = 0.2, fac_max = 10.0;

  Dopri5Stats stats;
  State<N> y = y0;
  State<N> k1 = f(t0, y);
  ++stats.evaluations;
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew;

  double t = t0;
  double h = std::min(opt.h_init, opt.h_max);
  double facold = 1e-4;
  bool last_rejected = false;

  while (t < t_end) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw NumericalError("dopri5: step budget exhausted at t = " + std::to_string(t));
    }
    if (t + h > t_end) h = t_end - t;
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericalError("dopri5: step size underflow at t = " + std::to_string(t));
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = f(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    k6 = f(t + h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                            a76 * k6[i]);
    k7 = f(t + h, ynew);
    stats.evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) {
      // Non-finite stage values: shrink hard and retry.
      h *= fac_min;
      ++stats.rejected;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(std::max(err, 1e-300), expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
    double h_new = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      ++stats.accepted;

      DenseStep<N> step;
      step.t0 = t;
      step.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        step.rcont[0][i] = y[i];
        step.rcont[1][i] = ydiff;
        step.rcont[2][i] = bspl;
        step.rcont[3][i] = ydiff - h * k7[i] - bspl;
        step.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                d6 * k6[i] + d7 * k7[i]);
      }

      k1 = k7;  // FSAL
      y = ynew;
      t += h;

      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = std::min(h_new, opt.h_max);

      if (!observe(step)) break;
    } else {
      h_new = h / std::min(1.0 / fac_min, fac11 / safe);
      ++stats.rejected;
      last_rejected = true;
      h = h_new;
    }
  }
  return stats;
}

}  // namespace nodal::ode
