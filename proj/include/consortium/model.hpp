#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace consortium {

// Number of biological states (s, e, v, q, c).
inline constexpr int kStateDim = 5;
inline constexpr int kControlDim = 2;

using Vec5 = Eigen::Matrix<double, kStateDim, 1>;
using Mat5 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Mat52 = Eigen::Matrix<double, kStateDim, kControlDim>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Biological and operational constants.
///
/// Concentrations s, e, c are in g/L, v in mg/L, the quota q in mg/g and all
/// rates in 1/day. Defaults are the Chlorella / E. coli calibration with a
/// glucose feed of 0.5 g/L and a dilution ceiling of 1 per day.
struct ModelParams {
  double k_v = 0.57;       // mg/L
  double k_s = 0.09;       // g/L
  double rho_max = 27.3;   // mg/g/day
  double phi_max = 6.48;   // 1/day
  double q_min = 2.7628;   // mg/g
  double gamma = 0.44;     // g/g
  double mu_max = 1.0211;  // 1/day
  double beta = 23.0;      // mg/g
  double s_in = 0.5;       // g/L
  double d_max = 1.0;      // 1/day

  /// Throws DomainError unless every field is finite and strictly positive.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

struct StateVector {
  double s = 0.0;  // glucose, g/L
  double e = 0.0;  // bacterial biomass, g/L
  double v = 0.0;  // vitamin, mg/L
  double q = 0.0;  // internal quota, mg/g
  double c = 0.0;  // algal biomass, g/L

  Vec5 to_vec() const { return Vec5(s, e, v, q, c); }
  static StateVector from_vec(const Vec5& x) { return {x(0), x(1), x(2), x(3), x(4)}; }

  bool operator==(const StateVector&) const = default;
};

struct ControlPoint {
  double alpha = 0.0;  // resource allocation to vitamin synthesis, [0, 1]
  double d = 0.0;      // dilution rate, [0, d_max]

  bool operator==(const ControlPoint&) const = default;
};

/// True when s, e, v, c >= 0 and q >= q_min, each up to `tol`.
bool in_state_space(const StateVector& x, const ModelParams& p, double tol = 0.0);
bool is_admissible(const ControlPoint& u, const ModelParams& p);

/// a*x/(b+x). Negative x is a DomainError.
double monod(double x, double a, double b);

/// Inverse of monod on (0, a): b*y/(a-y).
double monod_inverse(double y, double a, double b);

/// Bacterial growth rate phi(s), 1/day.
double phi(double s, const ModelParams& p);
/// Vitamin uptake rate rho(v), mg/g/day. Exactly 0 at v = 0.
double rho(double v, const ModelParams& p);
/// Droop growth rate mu_max (1 - q_min/q). DomainError below q_min.
double mu(double q, const ModelParams& p);
/// Inverse of mu on [0, mu_max).
double mu_inverse(double d, const ModelParams& p);

/// Vector field of the consortium chemostat. Checks q >= q_min.
Vec5 dynamics(const StateVector& x, const ControlPoint& u, const ModelParams& p);

/// Harvest rate f0 = d*c, g/L/day.
double harvest_rate(const StateVector& x, const ControlPoint& u);

namespace detail {

// Unchecked kernels used by integrators and adjoints. The caller guarantees
// q >= q_min (see the quota guard in sim).
Vec5 rhs(const Vec5& x, double alpha, double d, const ModelParams& p);
Mat5 rhs_state_jacobian(const Vec5& x, double alpha, double d, const ModelParams& p);
Mat52 rhs_control_jacobian(const Vec5& x, const ModelParams& p);

}  // namespace detail

}  // namespace consortium
