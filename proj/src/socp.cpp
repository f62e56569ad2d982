#include "consortium/socp.hpp"

#include <cmath>
#include <sstream>

#include "consortium/equilibria.hpp"

namespace consortium {

bool static_feasible(double alpha, double d, const ModelParams& p) {
  return alpha > 0.0 && alpha < 1.0 && d > 0.0 && psi_alpha_inverse(alpha, d, p) < p.s_in;
}

double static_objective(double alpha, double d, const ModelParams& p) {
  if (!static_feasible(alpha, d, p)) throw DomainError("functional equilibrium does not exist");
  return (p.s_in - psi_alpha_inverse(alpha, d, p)) *
         (alpha * p.beta * p.gamma * d / mu_inverse(d, p));
}

double static_objective_from_equilibrium(double alpha, double d, const ModelParams& p) {
  const auto x = functional_equilibrium(alpha, d, p);
  if (!x) throw DomainError("functional equilibrium does not exist");
  return d * x->c;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

Interval feasible_alpha_interval(double d, const ModelParams& p) {
  if (!(d > 0.0)) throw DomainError("feasible alpha interval: d must be > 0");
  // psi_alpha^{-1}(d) is convex in alpha and infinite once d/(1-alpha) >= phi_max.
  const double alpha_cap = 1.0 - d / p.phi_max;
  auto g = [&](double a) { return psi_alpha_inverse(a, d, p); };
  const double a_min = golden_section_max([&](double a) { return -g(a); }, 0.0, alpha_cap, 1e-13);
  if (!(g(a_min) < p.s_in)) {
    std::ostringstream msg;
    msg << "empty feasible alpha interval at d = " << d;
    throw DomainError(msg.str());
  }
  auto boundary = [&](double inside, double outside) {
    while (std::abs(outside - inside) > 1e-14) {
      const double mid = 0.5 * (inside + outside);
      (g(mid) < p.s_in ? inside : outside) = mid;
    }
    return inside;
  };
  return {boundary(a_min, 0.0), boundary(a_min, alpha_cap)};
}

double maximize_alpha(double d, const ModelParams& p) {
  const Interval range = feasible_alpha_interval(d, p);
  auto f = [&](double a) { return static_feasible(a, d, p) ? static_objective(a, d, p) : 0.0; };
  return golden_section_max(f, range.lo, range.hi);
}

double maximize_d(double alpha, const ModelParams& p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("maximize_d: alpha must be in (0, 1)");
  const double d1 = thresholds(alpha, p).d1;
  auto log_f = [&](double d) {
    return static_feasible(alpha, d, p) ? std::log(static_objective(alpha, d, p))
                                        : -std::numeric_limits<double>::infinity();
  };
  return golden_section_max(log_f, 0.0, d1);
}

StaticSolution coordinate_ascent(const ModelParams& p, double alpha0, double d0,
                                 std::size_t max_sweeps, double tol) {
  p.validate();
  StaticSolution sol;
  double alpha = alpha0, d = d0;
  double previous = static_feasible(alpha, d, p) ? static_objective(alpha, d, p) : 0.0;
  sol.trace.push_back({alpha, d, previous});
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    alpha = maximize_alpha(d, p);
    d = maximize_d(alpha, p);
    const double value = static_objective(alpha, d, p);
    sol.trace.push_back({alpha, d, value});
    sol.iterations = sweep;
    if (value - previous < tol) {
      sol.alpha_bar = alpha;
      sol.d_bar = d;
      sol.objective = value;
      return sol;
    }
    previous = value;
  }
  throw AscentError("coordinate ascent: sweep cap exceeded", std::move(sol.trace));
}

bool ContourGrid::feasible(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }

ContourGrid contour_grid(const ModelParams& p, const GridSpec& spec) {
  ContourGrid g;
  const double d_hi = spec.d_hi > 0.0 ? spec.d_hi : p.d_max;
  for (std::size_t i = 0; i < spec.n_alpha; ++i)
    g.alphas.push_back((i + 0.5) / static_cast<double>(spec.n_alpha));
  for (std::size_t j = 0; j < spec.n_d; ++j)
    g.ds.push_back(d_hi * (j + 0.5) / static_cast<double>(spec.n_d));

  g.values.reserve(spec.n_alpha * spec.n_d);
  for (double a : g.alphas)
    for (double d : g.ds)
      g.values.push_back(static_feasible(a, d, p) ? static_objective(a, d, p) : kInfeasible);

  for (double d : g.ds) {
    double best = kInfeasible;
    try {
      best = maximize_alpha(d, p);
    } catch (const DomainError&) {
    }
    g.ridge_alpha_of_d.push_back(best);
  }
  for (double a : g.alphas) g.ridge_d_of_alpha.push_back(maximize_d(a, p));
  return g;
}

}  // namespace consortium
