#include "consortium/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace consortium {

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::GAS:
      return "GAS";
    case Stability::Unstable:
      return "unstable";
    case Stability::Nonexistent:
      return "nonexistent";
  }
  return "?";
}

DerivedRates derived_rates(const ModelParams& p) {
  const double denom = p.rho_max + p.q_min * p.mu_max;
  return {p.mu_max * p.rho_max / denom, p.k_v * p.q_min * p.mu_max / denom};
}

double psi_inverse(double d, const ModelParams& p) {
  const DerivedRates r = derived_rates(p);
  return monod_inverse(d, r.psi_max, r.k_c);
}

double psi_alpha_inverse(double alpha, double d, const ModelParams& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (alpha <= 0.0 || alpha >= 1.0 || d <= 0.0) return d <= 0.0 ? 0.0 : inf;
  const double bacterial_rate = d / (1.0 - alpha);
  if (bacterial_rate >= p.phi_max || d >= derived_rates(p).psi_max) return inf;
  return monod_inverse(bacterial_rate, p.phi_max, p.k_s) +
         psi_inverse(d, p) / (alpha * p.beta * p.gamma);
}

std::optional<BacterialEquilibrium> bacterial_equilibrium(double alpha, double d,
                                                          const ModelParams& p) {
  if (alpha >= 1.0 || d <= 0.0) return std::nullopt;
  if (d >= (1.0 - alpha) * phi(p.s_in, p)) return std::nullopt;
  const double s = monod_inverse(d / (1.0 - alpha), p.phi_max, p.k_s);
  return BacterialEquilibrium{s, (1.0 - alpha) * p.gamma * (p.s_in - s)};
}

double vitamin_feed(double alpha, double d, const ModelParams& p) {
  const auto bac = bacterial_equilibrium(alpha, d, p);
  if (!bac) return 0.0;
  return alpha * p.beta * p.gamma * (p.s_in - bac->s);
}

std::optional<StateVector> algal_washout_equilibrium(double alpha, double d,
                                                     const ModelParams& p) {
  const auto bac = bacterial_equilibrium(alpha, d, p);
  if (!bac) return std::nullopt;
  const double v_in = alpha * p.beta * p.gamma * (p.s_in - bac->s);
  const double q0 = p.q_min + rho(v_in, p) / p.mu_max;
  return StateVector{bac->s, bac->e, v_in, q0, 0.0};
}

std::optional<StateVector> functional_equilibrium(double alpha, double d, const ModelParams& p) {
  if (alpha <= 0.0 || alpha >= 1.0 || d <= 0.0) return std::nullopt;
  if (!(psi_alpha_inverse(alpha, d, p) < p.s_in)) return std::nullopt;
  const auto bac = bacterial_equilibrium(alpha, d, p);
  if (!bac) return std::nullopt;
  const double v_in = alpha * p.beta * p.gamma * (p.s_in - bac->s);
  const double v = psi_inverse(d, p);
  const double q = mu_inverse(d, p);
  return StateVector{bac->s, bac->e, v, q, (v_in - v) / q};
}

StateVector washout_equilibrium(const ModelParams& p) {
  return StateVector{p.s_in, 0.0, 0.0, p.q_min, 0.0};
}

Thresholds thresholds(double alpha, const ModelParams& p) {
  Thresholds t;
  t.d2 = std::max(0.0, (1.0 - alpha) * phi(p.s_in, p));
  if (alpha <= 0.0 || alpha >= 1.0) {
    t.degenerate = true;
    return t;
  }
  // psi_alpha^{-1} is strictly increasing from 0 and blows up at the upper end.
  double lo = 0.0;
  double hi = std::min(t.d2, derived_rates(p).psi_max);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (psi_alpha_inverse(alpha, mid, p) < p.s_in)
      lo = mid;
    else
      hi = mid;
  }
  t.d1 = 0.5 * (lo + hi);
  return t;
}

std::string_view EquilibriumReport::gas_label() const {
  if (functional_stability == Stability::GAS) return "x11";
  if (algal_washout_stability == Stability::GAS) return "x10";
  return "x0";
}

const StateVector& EquilibriumReport::gas_point() const {
  if (functional_stability == Stability::GAS) return *functional;
  if (algal_washout_stability == Stability::GAS) return *algal_washout;
  return washout;
}

EquilibriumReport classify_stability(double alpha, double d, const ModelParams& p) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(d > 0.0))
    throw DomainError("classify_stability: need 0 <= alpha <= 1 and d > 0");
  const Thresholds t = thresholds(alpha, p);
  const bool near_d1 = !t.degenerate && std::abs(d - t.d1) <= kBifurcationTolerance;
  if (near_d1 || std::abs(d - t.d2) <= kBifurcationTolerance)
    throw DomainError("bifurcation value");

  EquilibriumReport r;
  r.alpha = alpha;
  r.d = d;
  r.d1 = t.d1;
  r.d2 = t.d2;
  r.washout = washout_equilibrium(p);
  r.algal_washout = algal_washout_equilibrium(alpha, d, p);
  r.functional = functional_equilibrium(alpha, d, p);

  if (r.functional) {
    r.functional_stability = Stability::GAS;
    r.algal_washout_stability = Stability::Unstable;
    r.washout_stability = Stability::Unstable;
  } else if (r.algal_washout) {
    r.algal_washout_stability = Stability::GAS;
    r.washout_stability = Stability::Unstable;
  } else {
    r.washout_stability = Stability::GAS;
  }
  return r;
}

std::vector<std::complex<double>> jacobian_eigenvalues(const StateVector& x,
                                                       const ControlPoint& u,
                                                       const ModelParams& p) {
  const Vec5 x0 = x.to_vec();
  Mat5 J;
  for (int j = 0; j < kStateDim; ++j) {
    const double h = 1e-6 * std::max(std::abs(x0(j)), 1.0);
    Vec5 plus = x0, minus = x0;
    plus(j) += h;
    minus(j) -= h;
    J.col(j) = (detail::rhs(plus, u.alpha, u.d, p) - detail::rhs(minus, u.alpha, u.d, p)) / (2 * h);
  }
  Eigen::EigenSolver<Mat5> solver(J, false);
  std::vector<std::complex<double>> out(kStateDim);
  for (int i = 0; i < kStateDim; ++i) out[i] = solver.eigenvalues()(i);
  return out;
}

}  // namespace consortium
