#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library code paths it is used to check.

#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace oracle {

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-14) {
  double flo = f(lo);
  for (int it = 0; it < 500 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Table I values written out independently of ModelParams.
struct Table {
  static constexpr double k_v = 0.57, k_s = 0.09, rho_max = 27.3, phi_max = 6.48;
  static constexpr double q_min = 2.7628, gamma = 0.44, mu_max = 1.0211, beta = 23.0;
  static constexpr double s_in = 0.5;
};

inline double phi(double s) { return Table::phi_max * s / (Table::k_s + s); }
inline double rho(double v) { return Table::rho_max * v / (Table::k_v + v); }
inline double mu(double q) { return Table::mu_max * (1 - Table::q_min / q); }

using State = std::array<double, 5>;

/// Straight transcription of the five balance equations.
inline State field(const State& x, double alpha, double d) {
  const auto [s, e, v, q, c] = x;
  return {-phi(s) * e / Table::gamma + d * (Table::s_in - s), (1 - alpha) * phi(s) * e - d * e,
          alpha * Table::beta * phi(s) * e - rho(v) * c - d * v, rho(v) - mu(q) * q,
          mu(q) * c - d * c};
}

/// Classical RK4 with many small steps, for long-horizon cross-checks.
inline State integrate_rk4(State x, double alpha, double d, double t_f, int steps) {
  const double h = t_f / steps;
  auto axpy = [](const State& a, double t, const State& b) {
    State r;
    for (int i = 0; i < 5; ++i) r[i] = a[i] + t * b[i];
    return r;
  };
  for (int k = 0; k < steps; ++k) {
    const State k1 = field(x, alpha, d);
    const State k2 = field(axpy(x, h / 2, k1), alpha, d);
    const State k3 = field(axpy(x, h / 2, k2), alpha, d);
    const State k4 = field(axpy(x, h, k3), alpha, d);
    for (int i = 0; i < 5; ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace oracle
