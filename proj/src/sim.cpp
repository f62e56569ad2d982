#include "consortium/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace consortium {

ControlSchedule ControlSchedule::constant(double t_f, std::size_t n_steps, ControlPoint u) {
  ControlSchedule s;
  s.t_f = t_f;
  s.alpha.assign(n_steps, u.alpha);
  s.d.assign(n_steps, u.d);
  return s;
}

void ControlSchedule::validate(const ModelParams& p) const {
  if (!(t_f > 0.0) || !std::isfinite(t_f)) throw DomainError("schedule: t_f must be > 0");
  if (alpha.empty()) throw DomainError("schedule: n_steps must be >= 1");
  if (alpha.size() != d.size()) throw DomainError("schedule: alpha and d sizes differ");
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!is_admissible(at(k), p)) {
      std::ostringstream msg;
      msg << "schedule: control " << k << " = (" << alpha[k] << ", " << d[k]
          << ") outside [0,1] x [0," << p.d_max << "]";
      throw DomainError(msg.str());
    }
  }
}

namespace {

Vec5 biological(const Vec6& x) { return x.head<kStateDim>(); }

Vec6 to_augmented(const StateVector& x, double harvest) {
  Vec6 out;
  out << x.s, x.e, x.v, x.q, x.c, harvest;
  return out;
}

StateVector from_augmented(const Vec6& x) { return StateVector::from_vec(biological(x)); }

double clamp_quota(Vec6& x, const ModelParams& p, std::size_t* clamps) {
  if (x(3) < p.q_min) {
    x(3) = p.q_min;
    if (clamps) ++*clamps;
  }
  return x(3);
}

}  // namespace

// Outside Omega the field is evaluated at the nearest point with s, v >= 0 and
// q >= q_min. Implicit stages at coarse steps can wander there, and the Monod
// terms have poles at -k_s and -k_v.
static Vec5 guarded(const Vec6& x, const ModelParams& p, std::array<bool, kStateDim>* clamped) {
  Vec5 bio = biological(x);
  const std::array<double, kStateDim> floor = {0.0, -INFINITY, 0.0, p.q_min, -INFINITY};
  for (int i = 0; i < kStateDim; ++i) {
    const bool low = bio(i) < floor[i];
    if (low) bio(i) = floor[i];
    if (clamped) (*clamped)[i] = low;
  }
  return bio;
}

Vec6 augmented_rhs(const Vec6& x, const ControlPoint& u, const ModelParams& p,
                   std::size_t* clamps) {
  const Vec5 bio = guarded(x, p, nullptr);
  if (clamps && x(3) < p.q_min) ++*clamps;
  Vec6 dx;
  dx.head<kStateDim>() = detail::rhs(bio, u.alpha, u.d, p);
  dx(5) = u.d * bio(4);
  return dx;
}

Mat6 augmented_state_jacobian(const Vec6& x, const ControlPoint& u, const ModelParams& p) {
  std::array<bool, kStateDim> clamped;
  const Vec5 bio = guarded(x, p, &clamped);
  Mat6 J = Mat6::Zero();
  J.topLeftCorner<kStateDim, kStateDim>() = detail::rhs_state_jacobian(bio, u.alpha, u.d, p);
  for (int i = 0; i < kStateDim; ++i)
    if (clamped[i]) J.col(i).setZero();
  J(5, 4) = u.d;
  return J;
}

Mat62 augmented_control_jacobian(const Vec6& x, const ModelParams& p) {
  const Vec5 bio = guarded(x, p, nullptr);
  Mat62 B = Mat62::Zero();
  B.topRows<kStateDim>() = detail::rhs_control_jacobian(bio, p);
  B(5, 1) = bio(4);
  return B;
}

namespace {

using GL = GaussLegendre2;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

struct StageEval {
  std::array<Vec6, 2> points;
  std::array<Vec6, 2> slopes;
};

StageEval evaluate_stages(const Vec6& x, const std::array<Vec6, 2>& K, const ControlPoint& u,
                          double h, const ModelParams& p, std::size_t* clamps) {
  StageEval out;
  for (int i = 0; i < 2; ++i) {
    out.points[i] = x + h * (GL::a[i][0] * K[0] + GL::a[i][1] * K[1]);
    out.slopes[i] = augmented_rhs(out.points[i], u, p, clamps);
  }
  return out;
}

double stage_residual(const std::array<Vec6, 2>& K, const StageEval& ev) {
  return std::max((ev.slopes[0] - K[0]).lpNorm<Eigen::Infinity>(),
                  (ev.slopes[1] - K[1]).lpNorm<Eigen::Infinity>());
}

double stage_scale(const std::array<Vec6, 2>& K) {
  return std::max({1.0, K[0].lpNorm<Eigen::Infinity>(), K[1].lpNorm<Eigen::Infinity>()});
}

}  // namespace

StageSolution solve_implicit_stage(const Vec6& x, const ControlPoint& u, double h,
                                   const ModelParams& p, std::size_t step, std::size_t* clamps) {
  if (!(h > 0.0)) throw DomainError("solve_implicit_stage: h must be > 0");
  StageSolution sol;
  std::array<Vec6, 2> K;
  K[0] = K[1] = augmented_rhs(x, u, p, clamps);

  // Fixed-point sweeps. The best iterate seeds Newton, since the sweeps
  // diverge once h times the local stiffness exceeds one.
  std::array<Vec6, 2> best = K;
  double best_res = INFINITY;
  for (int it = 1; it <= kFixedPointIterations; ++it) {
    const StageEval ev = evaluate_stages(x, K, u, h, p, clamps);
    const double res = stage_residual(K, ev);
    if (res < best_res) {
      best_res = res;
      best = K;
    }
    K = ev.slopes;
    sol.iterations = it;
    if (res < kStageTolerance * stage_scale(K)) {
      const StageEval fin = evaluate_stages(x, K, u, h, p, clamps);
      sol.points = fin.points;
      sol.residual = stage_residual(K, fin);
      sol.slopes = K;
      return sol;
    }
    if (!std::isfinite(res)) break;
  }

  // Damped Newton on G(K) = K - F(K), backtracking on |G|_2.
  sol.used_newton = true;
  K = best;
  auto pack = [](const std::array<Vec6, 2>& k) {
    Vec12 v;
    v << k[0], k[1];
    return v;
  };
  StageEval ev = evaluate_stages(x, K, u, h, p, clamps);
  double res = stage_residual(K, ev);
  Vec12 G = pack(K) - pack(ev.slopes);
  for (int it = 0; it < kNewtonIterations; ++it) {
    if (res < kStageTolerance * stage_scale(K)) break;
    Mat12 DG = Mat12::Identity();
    for (int i = 0; i < 2; ++i) {
      const Mat6 J = augmented_state_jacobian(ev.points[i], u, p);
      for (int j = 0; j < 2; ++j) DG.block<6, 6>(6 * i, 6 * j) -= h * GL::a[i][j] * J;
    }
    const Vec12 delta = DG.partialPivLu().solve(-G);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      std::array<Vec6, 2> trial = {K[0] + t * delta.head<6>(), K[1] + t * delta.tail<6>()};
      const StageEval trial_ev = evaluate_stages(x, trial, u, h, p, clamps);
      const Vec12 trial_G = pack(trial) - pack(trial_ev.slopes);
      const double trial_res = stage_residual(trial, trial_ev);
      if (trial_G.norm() < G.norm() || trial_res < kStageTolerance * stage_scale(trial)) {
        K = trial;
        ev = trial_ev;
        G = trial_G;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    ++sol.iterations;
    if (!accepted) break;
  }
  if (!(res < kStageTolerance * stage_scale(K))) {
    std::ostringstream msg;
    msg << "implicit stage solve failed at step " << step << " (residual " << res << ")";
    throw IntegrationError(msg.str(), step, res);
  }
  sol.slopes = K;
  sol.points = ev.points;
  sol.residual = res;
  return sol;
}

Vec6 rk4_step(const Vec6& x, const ControlPoint& u, double h, const ModelParams& p,
              std::size_t* clamps) {
  const Vec6 k1 = augmented_rhs(x, u, p, clamps);
  const Vec6 k2 = augmented_rhs(x + 0.5 * h * k1, u, p, clamps);
  const Vec6 k3 = augmented_rhs(x + 0.5 * h * k2, u, p, clamps);
  const Vec6 k4 = augmented_rhs(x + h * k3, u, p, clamps);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

Trajectory start_trajectory(const StateVector& x0, const ControlSchedule& schedule,
                            const ModelParams& p) {
  p.validate();
  schedule.validate(p);
  if (!in_state_space(x0, p)) throw DomainError("initial state outside the state space");
  const std::size_t n = schedule.n_steps();
  Trajectory traj;
  traj.times.resize(n + 1);
  traj.states.reserve(n + 1);
  traj.harvest.reserve(n + 1);
  traj.controls.resize(n);
  const double h = schedule.step();
  for (std::size_t k = 0; k <= n; ++k) traj.times[k] = (k == n) ? schedule.t_f : h * k;
  for (std::size_t k = 0; k < n; ++k) traj.controls[k] = schedule.at(k);
  traj.states.push_back(x0);
  traj.harvest.push_back(0.0);
  return traj;
}

}  // namespace

RecordedTrajectory integrate_recording(const StateVector& x0, const ControlSchedule& schedule,
                                       const ModelParams& p) {
  RecordedTrajectory out{start_trajectory(x0, schedule, p), {}};
  Trajectory& traj = out.trajectory;
  const std::size_t n = schedule.n_steps();
  const double h = schedule.step();
  out.stages.reserve(n);
  Vec6 x = to_augmented(x0, 0.0);
  std::size_t* clamps = &traj.warnings.quota_clamps;
  for (std::size_t k = 0; k < n; ++k) {
    const ControlPoint u = traj.controls[k];
    StageSolution st = solve_implicit_stage(x, u, h, p, k, clamps);
    x += h * (GL::b[0] * st.slopes[0] + GL::b[1] * st.slopes[1]);
    clamp_quota(x, p, clamps);
    out.stages.push_back(std::move(st));
    traj.states.push_back(from_augmented(x));
    traj.harvest.push_back(x(5));
  }
  return out;
}

Trajectory integrate(const StateVector& x0, const ControlSchedule& schedule, const ModelParams& p,
                     Method method) {
  if (method == Method::GaussLegendre2) return integrate_recording(x0, schedule, p).trajectory;

  Trajectory traj = start_trajectory(x0, schedule, p);
  const std::size_t n = schedule.n_steps();
  const double h = schedule.step();
  Vec6 x = to_augmented(x0, 0.0);
  std::size_t* clamps = &traj.warnings.quota_clamps;
  for (std::size_t k = 0; k < n; ++k) {
    x = rk4_step(x, traj.controls[k], h, p, clamps);
    clamp_quota(x, p, clamps);
    traj.states.push_back(from_augmented(x));
    traj.harvest.push_back(x(5));
  }
  return traj;
}

double trapezoid_harvest(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t k = 0; k < traj.controls.size(); ++k) {
    const double h = traj.times[k + 1] - traj.times[k];
    total += 0.5 * h * traj.controls[k].d * (traj.states[k].c + traj.states[k + 1].c);
  }
  return total;
}

}  // namespace consortium
