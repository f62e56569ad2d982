#include "consortium/model.hpp"

#include <cmath>
#include <sstream>

namespace consortium {

namespace {

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream msg;
    msg << "parameter " << name << " must be finite and > 0 (got " << value << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

void ModelParams::validate() const {
  require_positive(k_v, "k_v");
  require_positive(k_s, "k_s");
  require_positive(rho_max, "rho_max");
  require_positive(phi_max, "phi_max");
  require_positive(q_min, "q_min");
  require_positive(gamma, "gamma");
  require_positive(mu_max, "mu_max");
  require_positive(beta, "beta");
  require_positive(s_in, "s_in");
  require_positive(d_max, "d_max");
}

bool in_state_space(const StateVector& x, const ModelParams& p, double tol) {
  return x.s >= -tol && x.e >= -tol && x.v >= -tol && x.c >= -tol && x.q >= p.q_min - tol;
}

bool is_admissible(const ControlPoint& u, const ModelParams& p) {
  return u.alpha >= 0.0 && u.alpha <= 1.0 && u.d >= 0.0 && u.d <= p.d_max;
}

double monod(double x, double a, double b) {
  if (x < 0.0) throw DomainError("monod: negative argument");
  return a * x / (b + x);
}

double monod_inverse(double y, double a, double b) {
  if (!(y > 0.0 && y < a)) throw DomainError("outside range of Monod function");
  return b * y / (a - y);
}

double phi(double s, const ModelParams& p) { return monod(s, p.phi_max, p.k_s); }

double rho(double v, const ModelParams& p) { return monod(v, p.rho_max, p.k_v); }

double mu(double q, const ModelParams& p) {
  if (q < p.q_min) throw DomainError("quota below q_min");
  return p.mu_max * (1.0 - p.q_min / q);
}

double mu_inverse(double d, const ModelParams& p) {
  if (!(d >= 0.0 && d < p.mu_max)) throw DomainError("mu_inverse: rate outside [0, mu_max)");
  return p.q_min * p.mu_max / (p.mu_max - d);
}

Vec5 dynamics(const StateVector& x, const ControlPoint& u, const ModelParams& p) {
  if (x.s < 0.0 || x.v < 0.0) throw DomainError("dynamics: negative concentration");
  if (x.q < p.q_min) throw DomainError("quota below q_min");
  return detail::rhs(x.to_vec(), u.alpha, u.d, p);
}

double harvest_rate(const StateVector& x, const ControlPoint& u) { return u.d * x.c; }

namespace detail {

Vec5 rhs(const Vec5& x, double alpha, double d, const ModelParams& p) {
  const double s = x(0), e = x(1), v = x(2), q = x(3), c = x(4);
  const double growth = p.phi_max * s / (p.k_s + s);
  const double uptake = p.rho_max * v / (p.k_v + v);
  const double droop = p.mu_max * (1.0 - p.q_min / q);
  Vec5 dx;
  dx(0) = -growth * e / p.gamma + d * (p.s_in - s);
  dx(1) = (1.0 - alpha) * growth * e - d * e;
  dx(2) = alpha * p.beta * growth * e - uptake * c - d * v;
  // mu(q) q simplifies to mu_max (q - q_min).
  dx(3) = uptake - p.mu_max * (q - p.q_min);
  dx(4) = droop * c - d * c;
  return dx;
}

Mat5 rhs_state_jacobian(const Vec5& x, double alpha, double d, const ModelParams& p) {
  const double s = x(0), e = x(1), v = x(2), q = x(3), c = x(4);
  const double growth = p.phi_max * s / (p.k_s + s);
  const double growth_ds = p.phi_max * p.k_s / ((p.k_s + s) * (p.k_s + s));
  const double uptake = p.rho_max * v / (p.k_v + v);
  const double uptake_dv = p.rho_max * p.k_v / ((p.k_v + v) * (p.k_v + v));
  const double droop = p.mu_max * (1.0 - p.q_min / q);
  const double droop_dq = p.mu_max * p.q_min / (q * q);

  Mat5 J = Mat5::Zero();
  J(0, 0) = -growth_ds * e / p.gamma - d;
  J(0, 1) = -growth / p.gamma;
  J(1, 0) = (1.0 - alpha) * growth_ds * e;
  J(1, 1) = (1.0 - alpha) * growth - d;
  J(2, 0) = alpha * p.beta * growth_ds * e;
  J(2, 1) = alpha * p.beta * growth;
  J(2, 2) = -uptake_dv * c - d;
  J(2, 4) = -uptake;
  J(3, 2) = uptake_dv;
  J(3, 3) = -p.mu_max;
  J(4, 3) = droop_dq * c;
  J(4, 4) = droop - d;
  return J;
}

Mat52 rhs_control_jacobian(const Vec5& x, const ModelParams& p) {
  const double s = x(0), e = x(1), v = x(2), c = x(4);
  const double growth = p.phi_max * s / (p.k_s + s);
  Mat52 B = Mat52::Zero();
  B(0, 1) = p.s_in - s;
  B(1, 0) = -growth * e;
  B(1, 1) = -e;
  B(2, 0) = p.beta * growth * e;
  B(2, 1) = -v;
  B(4, 1) = -c;
  return B;
}

}  // namespace detail

}  // namespace consortium
