#include "consortium/docp.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "consortium/socp.hpp"

namespace consortium {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ProjectedGradient:
      return "projected-gradient";
    case Termination::SmallImprovement:
      return "small-improvement";
    case Termination::Stalled:
      return "stalled";
    case Termination::IterationCap:
      return "iteration-cap";
  }
  return "?";
}

void DocpSpec::validate(const ModelParams& p) const {
  if (!(t_f > 0.0)) throw DomainError("docp: t_f must be > 0");
  if (n_steps < 1) throw DomainError("docp: n_steps must be >= 1");
  if (!(d_max > 0.0) || !std::isfinite(d_max)) throw DomainError("docp: d_max must be > 0");
  if (!in_state_space(x0, p)) throw DomainError("docp: x0 outside the state space");
  if (initial.n_steps() != n_steps || initial.t_f != t_f)
    throw DomainError("docp: initial schedule does not match the mesh");
}

namespace {

using GL = GaussLegendre2;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

AdjointGradient backward_sweep(const RecordedTrajectory& rec, const ControlSchedule& schedule,
                               const ModelParams& p) {
  const std::size_t n = schedule.n_steps();
  const double h = schedule.step();
  AdjointGradient g;
  g.objective = rec.trajectory.total_harvest();
  g.alpha.resize(n);
  g.d.resize(n);

  // Objective is the harvest component of the final augmented state.
  Vec6 lambda = Vec6::Zero();
  lambda(5) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const ControlPoint u = schedule.at(k);
    const StageSolution& st = rec.stages[k];
    std::array<Mat6, 2> J;
    std::array<Mat62, 2> B;
    for (int i = 0; i < 2; ++i) {
      J[i] = augmented_state_jacobian(st.points[i], u, p);
      B[i] = augmented_control_jacobian(st.points[i], p);
    }
    // Linearized stage system: (I - h a_ij J_i) dK_j = J_i dx + B_i du.
    Mat12 N = Mat12::Identity();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) N.block<6, 6>(6 * i, 6 * j) -= h * GL::a[i][j] * J[i];
    Vec12 w;
    w << h * GL::b[0] * lambda, h * GL::b[1] * lambda;
    const Vec12 mu = N.transpose().partialPivLu().solve(w);
    const Vec6 mu0 = mu.head<6>(), mu1 = mu.tail<6>();

    const Eigen::Vector2d du = B[0].transpose() * mu0 + B[1].transpose() * mu1;
    g.alpha[k] = du(0);
    g.d[k] = du(1);
    lambda += J[0].transpose() * mu0 + J[1].transpose() * mu1;
  }
  return g;
}

ModelParams with_dmax(ModelParams p, double d_max) {
  p.d_max = d_max;
  return p;
}

}  // namespace

AdjointGradient discrete_adjoint_gradient(const ControlSchedule& schedule, const StateVector& x0,
                                          const ModelParams& p) {
  const RecordedTrajectory rec = integrate_recording(x0, schedule, p);
  return backward_sweep(rec, schedule, p);
}

DocpSolution transcribe_and_optimize(const DocpSpec& spec, const ModelParams& params) {
  const ModelParams p = with_dmax(params, spec.d_max);
  p.validate();
  spec.validate(p);
  spec.initial.validate(p);
  const OptimizerSettings& opt = spec.optimizer;
  const std::size_t n = spec.n_steps;
  const double h = spec.t_f / static_cast<double>(n);

  auto evaluate = [&](const ControlSchedule& s) {
    try {
      return integrate_recording(spec.x0, s, p);
    } catch (const IntegrationError& err) {
      throw DocpError(std::string("docp: ") + err.what(), s);
    }
  };
  auto project = [&](ControlSchedule& s) {
    for (std::size_t k = 0; k < n; ++k) {
      s.alpha[k] = std::clamp(s.alpha[k], 0.0, 1.0);
      s.d[k] = std::clamp(s.d[k], 0.0, p.d_max);
    }
  };
  // P(u + t grad / h)
  auto move = [&](const ControlSchedule& from, const AdjointGradient& g, double t) {
    ControlSchedule to = from;
    for (std::size_t k = 0; k < n; ++k) {
      to.alpha[k] += t * g.alpha[k] / h;
      to.d[k] += t * g.d[k] / h;
    }
    project(to);
    return to;
  };
  auto max_change = [&](const ControlSchedule& a, const ControlSchedule& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      m = std::max({m, std::abs(a.alpha[k] - b.alpha[k]), std::abs(a.d[k] - b.d[k])});
    return m;
  };

  DocpSolution sol;
  sol.schedule = spec.initial;
  project(sol.schedule);
  RecordedTrajectory rec = evaluate(sol.schedule);
  AdjointGradient grad = backward_sweep(rec, sol.schedule, p);
  double objective = grad.objective;
  double step = opt.initial_step;
  double bb_step = opt.initial_step;
  sol.termination = Termination::IterationCap;

  for (std::size_t it = 0;; ++it) {
    const double pg = max_change(move(sol.schedule, grad, 1.0), sol.schedule);
    sol.trace.push_back({it, objective, step, pg});
    sol.gradient_norm_projected = pg;
    if (pg < opt.projected_gradient_tol) {
      sol.termination = Termination::ProjectedGradient;
      break;
    }
    if (it >= opt.max_iterations) break;

    // Armijo backtracking along the projection arc.
    step = opt.step_rule == StepRule::BarzilaiBorwein ? bb_step : opt.initial_step;
    bool accepted = false;
    while (step >= opt.min_step) {
      ControlSchedule trial = move(sol.schedule, grad, step);
      double slope = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        slope += grad.alpha[k] * (trial.alpha[k] - sol.schedule.alpha[k]) +
                 grad.d[k] * (trial.d[k] - sol.schedule.d[k]);
      RecordedTrajectory trial_rec = evaluate(trial);
      const double trial_obj = trial_rec.trajectory.total_harvest();
      if (trial_obj >= objective + opt.armijo_fraction * slope && trial_obj >= objective) {
        const double improvement = trial_obj - objective;
        AdjointGradient trial_grad = backward_sweep(trial_rec, trial, p);
        // Spectral step for an ascent direction: s.s / -(s.y), y = change in grad/h.
        double ss = 0.0, sy = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double sa = trial.alpha[k] - sol.schedule.alpha[k];
          const double sd = trial.d[k] - sol.schedule.d[k];
          ss += sa * sa + sd * sd;
          sy += (sa * (trial_grad.alpha[k] - grad.alpha[k]) + sd * (trial_grad.d[k] - grad.d[k])) / h;
        }
        bb_step = sy < 0.0 ? std::clamp(ss / -sy, opt.min_step, opt.max_step) : opt.max_step;
        sol.schedule = std::move(trial);
        rec = std::move(trial_rec);
        grad = std::move(trial_grad);
        objective = trial_obj;
        accepted = true;
        if (improvement < opt.improvement_tol) sol.termination = Termination::SmallImprovement;
        break;
      }
      step *= opt.shrink;
    }
    if (!accepted) {
      sol.termination = Termination::Stalled;
      break;
    }
    if (sol.termination == Termination::SmallImprovement) {
      sol.trace.push_back({it + 1, objective, step,
                           max_change(move(sol.schedule, grad, 1.0), sol.schedule)});
      sol.gradient_norm_projected = sol.trace.back().projected_gradient;
      break;
    }
  }

  sol.objective = objective;
  sol.trajectory = std::move(rec.trajectory);
  return sol;
}

MultiStartResult multi_start(const DocpSpec& spec, const ModelParams& params,
                             const MultiStartOptions& options) {
  if (options.starts < 1) throw DomainError("multi_start: need at least one start");
  MultiStartResult out;
  if (options.warm_start) {
    const StaticSolution stat = coordinate_ascent(params);
    out.starting_controls.push_back({stat.alpha_bar, std::min(stat.d_bar, spec.d_max)});
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (out.starting_controls.size() < options.starts) {
    const double a = unit(rng);
    const double d = unit(rng) * spec.d_max;
    out.starting_controls.push_back({a, d});
  }

  std::vector<std::future<DocpSolution>> jobs;
  for (std::size_t i = 0; i < out.starting_controls.size(); ++i) {
    DocpSpec run = spec;
    run.initial = ControlSchedule::constant(spec.t_f, spec.n_steps, out.starting_controls[i]);
    jobs.push_back(std::async(std::launch::async, [run, params, i] {
      DocpSolution s = transcribe_and_optimize(run, params);
      s.start_index = i;
      return s;
    }));
  }
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      out.runs.push_back(jobs[i].get());
    } catch (const std::exception& err) {
      failures.push_back("start " + std::to_string(i) + ": " + err.what());
    }
  }
  if (out.runs.empty()) {
    std::ostringstream msg;
    msg << "multi_start: all starts failed";
    for (const auto& f : failures) msg << "; " << f;
    throw DocpError(msg.str());
  }
  // Runs are in start order, so the first maximum wins ties.
  auto best = std::max_element(out.runs.begin(), out.runs.end(),
                               [](const DocpSolution& a, const DocpSolution& b) {
                                 return a.objective < b.objective;
                               });
  out.best = *best;
  return out;
}

}  // namespace consortium
