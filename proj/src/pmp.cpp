#include "consortium/pmp.hpp"

#include <algorithm>
#include <cmath>

namespace consortium {

namespace {

struct Rates {
  double growth, growth_ds, uptake, uptake_dv, droop, droop_dq;
};

Rates rates_at(const StateVector& x, const ModelParams& p) {
  const double q = std::max(x.q, p.q_min);
  return {p.phi_max * x.s / (p.k_s + x.s),
          p.phi_max * p.k_s / ((p.k_s + x.s) * (p.k_s + x.s)),
          p.rho_max * x.v / (p.k_v + x.v),
          p.rho_max * p.k_v / ((p.k_v + x.v) * (p.k_v + x.v)),
          p.mu_max * (1.0 - p.q_min / q),
          p.mu_max * p.q_min / (q * q)};
}

}  // namespace

double hamiltonian(const StateVector& x, const Costate& l, double lambda0, const ControlPoint& u,
                   const ModelParams& p) {
  const Rates r = rates_at(x, p);
  const double q = std::max(x.q, p.q_min);
  return lambda0 * u.d * x.c +
         l(0) * (-r.growth * x.e / p.gamma + u.d * (p.s_in - x.s)) +
         l(1) * ((1.0 - u.alpha) * r.growth - u.d) * x.e +
         l(2) * (u.alpha * p.beta * r.growth * x.e - r.uptake * x.c - u.d * x.v) +
         l(3) * (r.uptake - r.droop * q) + l(4) * (r.droop - u.d) * x.c;
}

AffineHamiltonian affine_hamiltonian(const StateVector& x, const Costate& l, double lambda0,
                                     const ModelParams& p) {
  const Rates r = rates_at(x, p);
  const double q = std::max(x.q, p.q_min);
  const SwitchingFunctions z = switching_functions(x, l, lambda0, p);
  AffineHamiltonian out;
  out.h_tilde = -l(0) / p.gamma * r.growth * x.e + l(1) * r.growth * x.e -
                l(2) * r.uptake * x.c + l(3) * (r.uptake - r.droop * q) +
                l(4) * r.droop * x.c;
  out.zeta_alpha = z.zeta_alpha;
  out.zeta_d = z.zeta_d;
  return out;
}

SwitchingFunctions switching_functions(const StateVector& x, const Costate& l, double lambda0,
                                       const ModelParams& p) {
  const double growth = p.phi_max * x.s / (p.k_s + x.s);
  return {(p.beta * l(2) - l(1)) * growth * x.e,
          l(0) * (p.s_in - x.s) - l(1) * x.e - l(2) * x.v + (lambda0 - l(4)) * x.c};
}

Costate costate_rhs(const StateVector& x, const Costate& l, double lambda0, const ControlPoint& u,
                    const ModelParams& p) {
  const Rates r = rates_at(x, p);
  const double a = u.alpha, d = u.d;
  Costate dl;
  dl(0) = -(l(0) * (-r.growth_ds * x.e / p.gamma - d) + l(1) * (1.0 - a) * r.growth_ds * x.e +
            l(2) * a * p.beta * r.growth_ds * x.e);
  dl(1) = -(-l(0) * r.growth / p.gamma + l(1) * ((1.0 - a) * r.growth - d) +
            l(2) * a * p.beta * r.growth);
  dl(2) = -(l(2) * (-r.uptake_dv * x.c - d) + l(3) * r.uptake_dv);
  // d(mu(q) q)/dq = mu_max
  dl(3) = -(-l(3) * p.mu_max + l(4) * r.droop_dq * x.c);
  dl(4) = -(lambda0 * d - l(2) * r.uptake + l(4) * (r.droop - d));
  return dl;
}

double hamiltonian_gap(const StateVector& x, const Costate& l, double lambda0,
                       const ControlPoint& u, const ModelParams& p) {
  const SwitchingFunctions z = switching_functions(x, l, lambda0, p);
  const double best = std::max(z.zeta_alpha, 0.0) + std::max(z.zeta_d, 0.0) * p.d_max;
  return best - (z.zeta_alpha * u.alpha + z.zeta_d * u.d);
}

namespace {

using GL = GaussLegendre2;
using Mat10 = Eigen::Matrix<double, 10, 10>;
using Vec10 = Eigen::Matrix<double, 10, 1>;

Vec5 node_slope(const StateVector& x, const ControlPoint& u, const ModelParams& p) {
  Vec5 v = x.to_vec();
  v(3) = std::max(v(3), p.q_min);
  return detail::rhs(v, u.alpha, u.d, p);
}

// Cubic Hermite interpolation on one interval, theta in [0, 1].
StateVector hermite(const StateVector& x0, const StateVector& x1, const Vec5& f0, const Vec5& f1,
                    double h, double theta) {
  const double t2 = theta * theta, t3 = t2 * theta;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return StateVector::from_vec(h00 * x0.to_vec() + h10 * h * f0 + h01 * x1.to_vec() +
                               h11 * h * f1);
}

// d lambda / d tau = G lambda + g in reversed time tau = t_f - t.
void linear_parts(const StateVector& x, const ControlPoint& u, double lambda0,
                  const ModelParams& p, Mat5& G, Vec5& g) {
  for (int j = 0; j < kStateDim; ++j)
    G.col(j) = -costate_rhs(x, Costate::Unit(j), 0.0, u, p);
  g = -costate_rhs(x, Costate::Zero(), lambda0, u, p);
}

}  // namespace

CostatePath integrate_costates(const Trajectory& traj, const ModelParams& p, double lambda0) {
  const std::size_t n = traj.controls.size();
  if (traj.states.size() != n + 1 || traj.times.size() != n + 1)
    throw DomainError("integrate_costates: malformed trajectory");
  CostatePath path;
  path.lambda0 = lambda0;
  path.nodes.assign(n + 1, Costate::Zero());
  path.stage_states.resize(n);
  path.stage_costates.resize(n);

  Costate lambda = Costate::Zero();
  for (std::size_t k = n; k-- > 0;) {
    const ControlPoint u = traj.controls[k];
    const double h = traj.times[k + 1] - traj.times[k];
    const StateVector& xa = traj.states[k];
    const StateVector& xb = traj.states[k + 1];
    const Vec5 fa = node_slope(xa, u, p), fb = node_slope(xb, u, p);

    // Stage i sits at tau = c_i h from the right end, i.e. theta = 1 - c_i.
    std::array<StateVector, 2> xs;
    std::array<Mat5, 2> G;
    std::array<Vec5, 2> g;
    for (int i = 0; i < 2; ++i) {
      xs[i] = hermite(xa, xb, fa, fb, h, 1.0 - GL::c[i]);
      linear_parts(xs[i], u, lambda0, p, G[i], g[i]);
    }
    // K_i = G_i (lambda + h sum_j a_ij K_j) + g_i
    Mat10 M = Mat10::Identity();
    Vec10 rhs;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) M.block<5, 5>(5 * i, 5 * j) -= h * GL::a[i][j] * G[i];
      rhs.segment<5>(5 * i) = G[i] * lambda + g[i];
    }
    const Vec10 K = M.partialPivLu().solve(rhs);
    for (int i = 0; i < 2; ++i) {
      // Stage 0 is nearer t_{k+1}; store in forward-time order.
      const Costate stage = lambda + h * (GL::a[i][0] * K.head<5>() + GL::a[i][1] * K.tail<5>());
      path.stage_states[k][1 - i] = xs[i];
      path.stage_costates[k][1 - i] = stage;
    }
    lambda += h * (GL::b[0] * K.head<5>() + GL::b[1] * K.tail<5>());
    path.nodes[k] = lambda;
  }
  return path;
}

std::string_view to_string(ArcLabel l) {
  switch (l) {
    case ArcLabel::BangLow:
      return "bang_low";
    case ArcLabel::BangHigh:
      return "bang_high";
    case ArcLabel::Singular:
      return "singular";
  }
  return "?";
}

std::vector<ArcRun> compress_runs(const std::vector<ArcLabel>& labels) {
  std::vector<ArcRun> runs;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (!runs.empty() && runs.back().label == labels[k])
      runs.back().last = k;
    else
      runs.push_back({labels[k], k, k});
  }
  return runs;
}

double ArcClassification::consistency() const {
  const std::size_t total = alpha.nonsingular + d.nonsingular;
  return total == 0 ? 1.0 : static_cast<double>(alpha.consistent + d.consistent) / total;
}

namespace {

void label_control(ControlArcs& arcs, const std::vector<double>& values, double upper,
                   double epsilon_relative) {
  double peak = 0.0;
  for (double z : arcs.zeta) peak = std::max(peak, std::abs(z));
  arcs.epsilon = epsilon_relative * peak;
  const double sat_tol = 1e-6 * upper;
  arcs.labels.resize(arcs.zeta.size());
  for (std::size_t k = 0; k < arcs.zeta.size(); ++k) {
    const double z = arcs.zeta[k];
    if (std::abs(z) <= arcs.epsilon) {
      arcs.labels[k] = ArcLabel::Singular;
      continue;
    }
    ++arcs.nonsingular;
    if (z > 0.0) {
      arcs.labels[k] = ArcLabel::BangHigh;
      if (values[k] >= upper - sat_tol) ++arcs.consistent;
    } else {
      arcs.labels[k] = ArcLabel::BangLow;
      if (values[k] <= sat_tol) ++arcs.consistent;
    }
  }
}

}  // namespace

ArcClassification classify_arcs(const Trajectory& traj, const CostatePath& costates,
                                double epsilon_relative, const ModelParams& p) {
  const std::size_t n = traj.controls.size();
  if (costates.nodes.size() != traj.states.size() || costates.stage_states.size() != n)
    throw DomainError("classify_arcs: mesh mismatch between trajectory and costates");

  ArcClassification out;
  out.epsilon_relative = epsilon_relative;
  out.alpha.zeta.resize(n);
  out.d.zeta.resize(n);
  std::vector<double> alphas(n), ds(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Two-point Gauss mean over the interval.
    double za = 0.0, zd = 0.0;
    for (int i = 0; i < 2; ++i) {
      const SwitchingFunctions z = switching_functions(
          costates.stage_states[k][i], costates.stage_costates[k][i], costates.lambda0, p);
      za += GaussLegendre2::b[i] * z.zeta_alpha;
      zd += GaussLegendre2::b[i] * z.zeta_d;
    }
    out.alpha.zeta[k] = za;
    out.d.zeta[k] = zd;
    alphas[k] = traj.controls[k].alpha;
    ds[k] = traj.controls[k].d;
  }
  label_control(out.alpha, alphas, 1.0, epsilon_relative);
  label_control(out.d, ds, p.d_max, epsilon_relative);

  const SwitchingFunctions tf =
      switching_functions(traj.states.back(), costates.nodes.back(), costates.lambda0, p);
  out.zeta_alpha_tf = tf.zeta_alpha;
  out.zeta_d_tf = tf.zeta_d;
  out.d_ends_bang_high = n > 0 && out.d.labels.back() == ArcLabel::BangHigh &&
                         traj.controls.back().d >= p.d_max * (1.0 - 1e-6);

  double hmin = INFINITY, hmax = -INFINITY;
  for (std::size_t k = 0; k <= n; ++k) {
    const ControlPoint u = traj.controls[std::min(k, n - 1)];
    const double H = hamiltonian(traj.states[k], costates.nodes[k], costates.lambda0, u, p);
    hmin = std::min(hmin, H);
    hmax = std::max(hmax, H);
  }
  out.hamiltonian_drift = hmax - hmin;
  return out;
}

DilutionPhases dilution_phases(const ControlSchedule& schedule, double d_max, double low_frac,
                               double high_frac) {
  const std::size_t n = schedule.n_steps();
  DilutionPhases ph;
  while (ph.initial_low_end < n && schedule.d[ph.initial_low_end] <= low_frac * d_max)
    ++ph.initial_low_end;
  ph.terminal_high_begin = n;
  while (ph.terminal_high_begin > ph.initial_low_end &&
         schedule.d[ph.terminal_high_begin - 1] >= high_frac * d_max)
    --ph.terminal_high_begin;
  ph.three_phase = ph.initial_low_end > 0 && ph.terminal_high_begin < n &&
                   ph.initial_low_end < ph.terminal_high_begin;
  return ph;
}

SwitchingSeries switching_series(const Trajectory& traj, const CostatePath& costates,
                                 const ModelParams& p) {
  SwitchingSeries s;
  const std::size_t n = traj.controls.size();
  for (std::size_t k = 0; k <= n; ++k) {
    const SwitchingFunctions z =
        switching_functions(traj.states[k], costates.nodes[k], costates.lambda0, p);
    s.t.push_back(traj.times[k]);
    s.zeta_alpha.push_back(z.zeta_alpha);
    s.zeta_d.push_back(z.zeta_d);
    const ControlPoint u = traj.controls[std::min(k, n - 1)];
    s.hamiltonian.push_back(hamiltonian(traj.states[k], costates.nodes[k], costates.lambda0, u, p));
  }
  return s;
}

}  // namespace consortium
