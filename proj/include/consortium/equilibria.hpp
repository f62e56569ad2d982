#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "consortium/model.hpp"

namespace consortium {

enum class Stability { GAS, Unstable, Nonexistent };

std::string_view to_string(Stability s);

/// Monod description of psi(v) = psi_max v / (k_c + v), the algal growth rate
/// reached at equilibrium for an external vitamin level v.
struct DerivedRates {
  double psi_max = 0.0;  // 1/day
  double k_c = 0.0;      // mg/L
};

DerivedRates derived_rates(const ModelParams& p);

/// v* = psi^{-1}(d). Requires 0 < d < psi_max.
double psi_inverse(double d, const ModelParams& p);

/// psi_alpha^{-1}(d) = phi^{-1}(d/(1-alpha)) + psi^{-1}(d)/(alpha beta gamma).
/// Returns +inf where either inverse is undefined (d >= (1-alpha) phi_max or
/// d >= psi_max). The functional equilibrium exists iff the value is < s_in.
double psi_alpha_inverse(double alpha, double d, const ModelParams& p);

struct BacterialEquilibrium {
  double s = 0.0;
  double e = 0.0;
};

/// Nontrivial bacterial steady state, or nullopt when d >= (1-alpha) phi(s_in).
std::optional<BacterialEquilibrium> bacterial_equilibrium(double alpha, double d,
                                                          const ModelParams& p);

/// v_in* = alpha beta gamma (s_in - s*), mg/L. Zero at bacterial washout.
double vitamin_feed(double alpha, double d, const ModelParams& p);

/// Algal washout point x_{1,0} = (s*, e*, v_in*, q_0, 0).
std::optional<StateVector> algal_washout_equilibrium(double alpha, double d,
                                                     const ModelParams& p);

/// Coexistence point x* = x_{1,1}; nullopt unless d < d1(alpha).
std::optional<StateVector> functional_equilibrium(double alpha, double d, const ModelParams& p);

/// Total washout (s_in, 0, 0, q_min, 0).
StateVector washout_equilibrium(const ModelParams& p);

struct Thresholds {
  double d1 = 0.0;  // psi_alpha(s_in): coexistence below this
  double d2 = 0.0;  // (1-alpha) phi(s_in): bacteria persist below this
  bool degenerate = false;  // alpha at 0 or 1, d1 collapses to 0
};

/// d1 has no closed form; it is found by bisection on psi_alpha^{-1}(d) = s_in.
Thresholds thresholds(double alpha, const ModelParams& p);

struct EquilibriumReport {
  double alpha = 0.0;
  double d = 0.0;
  StateVector washout;
  std::optional<StateVector> algal_washout;
  std::optional<StateVector> functional;
  double d1 = 0.0;
  double d2 = 0.0;
  Stability washout_stability = Stability::Unstable;
  Stability algal_washout_stability = Stability::Nonexistent;
  Stability functional_stability = Stability::Nonexistent;

  /// Name of the GAS point: "x0", "x10" or "x11".
  std::string_view gas_label() const;
  /// The GAS equilibrium itself.
  const StateVector& gas_point() const;
};

inline constexpr double kBifurcationTolerance = 1e-9;

/// Builds every equilibrium for the constant control (alpha, d) and labels it
/// by regime (d < d1, d1 < d < d2, d > d2). Throws DomainError within 1e-9 of
/// d1 or d2, where stability is not classified.
EquilibriumReport classify_stability(double alpha, double d, const ModelParams& p);

/// Diagnostic only: eigenvalues of a central-difference Jacobian of the
/// vector field at x (step 1e-6 relative).
std::vector<std::complex<double>> jacobian_eigenvalues(const StateVector& x,
                                                       const ControlPoint& u,
                                                       const ModelParams& p);

}  // namespace consortium
