// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "consortium/docp.hpp"
#include "consortium/equilibria.hpp"
#include "consortium/pmp.hpp"
#include "consortium/scenario.hpp"
#include "consortium/sim.hpp"
#include "consortium/socp.hpp"

using namespace consortium;

namespace {

const ModelParams kP{};
constexpr std::size_t kDynamicSteps = 1400;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const StaticSolution& optimum() {
  static const StaticSolution s = coordinate_ascent(kP);
  return s;
}

StateVector x_star() { return *functional_equilibrium(optimum().alpha_bar, optimum().d_bar, kP); }

double static_harvest(const StateVector& x0, std::size_t n, const ModelParams& p = kP) {
  return integrate(x0, ControlSchedule::constant(20, n, {optimum().alpha_bar, optimum().d_bar}), p)
      .total_harvest();
}

DocpSolution optimize(const StateVector& x0, double d_max) {
  ModelParams p = kP;
  p.d_max = d_max;
  DocpSpec spec;
  spec.x0 = x0;
  spec.n_steps = kDynamicSteps;
  spec.d_max = d_max;
  spec.initial = ControlSchedule::constant(20, kDynamicSteps, {optimum().alpha_bar, optimum().d_bar});
  return transcribe_and_optimize(spec, p);
}

// The d_max = 1 solution from x_init is shared by criteria 3, 4 and 5.
const DocpSolution& reference_solution() {
  static const DocpSolution s = optimize(kInitialExperiment, 1.0);
  return s;
}

Outcome socp_optimum() {
  const StaticSolution& s = optimum();
  const bool ok = std::abs(s.alpha_bar - 0.8251) <= 0.002 && std::abs(s.d_bar - 0.4409) <= 0.002 &&
                  std::abs(s.objective - 0.330786) <= 0.0005;
  return {ok, fmt("alpha_bar=%.6f", s.alpha_bar) + fmt(" d_bar=%.6f", s.d_bar) +
                  fmt(" f0*=%.6f", s.objective)};
}

Outcome static_cells() {
  const double hi = static_harvest(kInitialExperiment, 7000);
  const double hs = static_harvest(x_star(), 7000);
  const double ei = std::abs(hi - 4.665953) / 4.665953;
  const double es = std::abs(hs - 6.615718) / 6.615718;
  return {ei <= 5e-3 && es <= 5e-3, fmt("x_init %.6f", hi) + fmt(" (rel err %.2e)", ei) +
                                        fmt(", x_star %.6f", hs) + fmt(" (rel err %.2e)", es)};
}

Outcome overyielding() {
  bool ok = true;
  std::string detail;
  const StateVector xs = x_star();
  for (double d_max : {0.75, 1.0, 1.5, 2.0}) {
    ModelParams p = kP;
    p.d_max = d_max;
    for (int row = 0; row < 2; ++row) {
      const StateVector& x0 = row == 0 ? kInitialExperiment : xs;
      const DocpSolution sol =
          (row == 0 && d_max == 1.0) ? reference_solution() : optimize(x0, d_max);
      const double base = static_harvest(x0, kDynamicSteps, p);
      const double gain = 100 * (sol.objective - base) / base;
      ok = ok && sol.objective > base;
      if (row == 0 && d_max == 1.0) ok = ok && gain >= 5.0;
      detail += fmt(" [d_max=%.2f", d_max) + (row == 0 ? " x_init " : " x_star ") +
                fmt("%.5f", sol.objective) + fmt(" vs %.5f", base) + fmt(" %+.2f%%]", gain);
    }
  }
  return {ok, detail};
}

Outcome docp_structure() {
  const DocpSolution& sol = reference_solution();
  const DilutionPhases ph = dilution_phases(sol.schedule, 1.0);
  const bool last = sol.schedule.d.back() >= 0.999;
  const double h = sol.schedule.step();
  return {ph.three_phase && last && ph.initial_low_end > 0,
          fmt("low [0, %.3f)", ph.initial_low_end * h) +
              fmt(", mixed [%.3f,", ph.initial_low_end * h) +
              fmt(" %.3f)", ph.terminal_high_begin * h) +
              fmt(", high [%.3f, 20]", ph.terminal_high_begin * h) +
              fmt(", last d = %.6f", sol.schedule.d.back())};
}

Outcome pmp_consistency() {
  const DocpSolution& sol = reference_solution();
  const CostatePath cp = integrate_costates(sol.trajectory, kP);
  const ArcClassification a = classify_arcs(sol.trajectory, cp, kDefaultSingularEpsilon, kP);
  const double c_tf = sol.trajectory.final_state().c;
  const bool ok = a.alpha.consistency() >= 0.95 && a.d.consistency() >= 0.95 &&
                  std::abs(a.zeta_d_tf - c_tf) <= 1e-10 &&
                  std::abs(a.zeta_alpha_tf) <= 10 * a.alpha.epsilon;
  return {ok, fmt("alpha %.4f", a.alpha.consistency()) + fmt(" d %.4f", a.d.consistency()) +
                  fmt(", |zeta_d(tf)-c(tf)|=%.1e", std::abs(a.zeta_d_tf - c_tf)) +
                  fmt(", |zeta_alpha(tf)|=%.1e", std::abs(a.zeta_alpha_tf)) +
                  fmt(" <= %.1e", 10 * a.alpha.epsilon)};
}

Outcome gradient_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  ControlSchedule s;
  s.t_f = 20;
  for (int k = 0; k < 700; ++k) {
    s.alpha.push_back(u(rng));
    s.d.push_back(u(rng));
  }
  const AdjointGradient g = discrete_adjoint_gradient(s, kInitialExperiment, kP);
  std::uniform_int_distribution<std::size_t> pick(0, 699);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t k = pick(rng);
    const bool alpha = i % 2 == 0;
    const double h = 1e-5;
    ControlSchedule up = s, dn = s;
    (alpha ? up.alpha : up.d)[k] += h;
    (alpha ? dn.alpha : dn.d)[k] -= h;
    const double fd = (integrate(kInitialExperiment, up, kP).total_harvest() -
                       integrate(kInitialExperiment, dn, kP).total_harvest()) / (2 * h);
    worst = std::max(worst, std::abs((alpha ? g.alpha : g.d)[k] - fd) / std::abs(fd));
  }
  return {worst < 1e-5, fmt("max rel err %.2e over 20 coordinates", worst)};
}

Outcome gas_convergence() {
  ModelParams p = kP;
  p.d_max = 2.0;
  const Thresholds th = thresholds(0.65, p);
  struct Sample {
    double alpha, d;
    const char* label;
  };
  const Sample samples[] = {{0.8251, 0.4409, "x11"},
                            {0.65, 0.5 * (th.d1 + th.d2), "x10"},
                            {0.8251, 1.2, "x0"}};
  bool ok = true;
  std::string detail;
  for (const Sample& s : samples) {
    const EquilibriumReport r = classify_stability(s.alpha, s.d, p);
    const Trajectory tr =
        integrate(kInitialExperiment, ControlSchedule::constant(300, 30000, {s.alpha, s.d}), p);
    const Vec5 x = tr.final_state().to_vec(), y = r.gas_point().to_vec();
    double worst = 0;
    for (int i = 0; i < 5; ++i) {
      // Relative where the equilibrium coordinate is nonzero, absolute where it is zero.
      const double err = y(i) != 0 ? std::abs(x(i) - y(i)) / std::abs(y(i)) : std::abs(x(i));
      worst = std::max(worst, err);
    }
    ok = ok && r.gas_label() == s.label && worst <= 1e-6;
    detail += fmt(" [(%.4f,", s.alpha) + fmt(" %.4f) ", s.d) + std::string(r.gas_label()) +
              fmt(" err %.1e]", worst);
  }
  return {ok, detail};
}

Outcome integrator_order() {
  auto final_state = [](std::size_t n) {
    return integrate(kInitialExperiment,
                     ControlSchedule::constant(5, n, {optimum().alpha_bar, optimum().d_bar}), kP)
        .final_state()
        .to_vec();
  };
  const Vec5 ref = final_state(10240);
  std::vector<double> err;
  for (std::size_t n : {100, 200, 400, 800})
    err.push_back((final_state(n) - ref).cwiseAbs().maxCoeff());
  bool ok = true;
  std::string detail = "orders";
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    const double order = std::log2(err[k] / err[k + 1]);
    ok = ok && order >= 3.7 && order <= 4.3;
    detail += fmt(" %.3f", order);
  }
  return {ok, detail};
}

Outcome concavity() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(0.001, 0.999), ud(0.001, 0.95), u01(0, 1);
  auto sample = [&] {
    for (;;) {
      const double a = ua(rng), d = ud(rng);
      if (static_feasible(a, d, kP)) return std::make_pair(a, d);
    }
  };
  double min_alpha = INFINITY, min_d = INFINITY;
  for (int n = 0; n < 1000;) {
    const auto [a0, d] = sample();
    const Interval I = feasible_alpha_interval(d, kP);
    const double a1 = I.lo + (I.hi - I.lo) * u01(rng);
    if (std::abs(a1 - a0) < 1e-3) continue;
    min_alpha = std::min(min_alpha, static_objective(0.5 * (a0 + a1), d, kP) -
                                        0.5 * (static_objective(a0, d, kP) +
                                               static_objective(a1, d, kP)));
    ++n;
  }
  for (int n = 0; n < 1000;) {
    const auto [a, d0] = sample();
    const double d1 = thresholds(a, kP).d1 * u01(rng);
    if (std::abs(d1 - d0) < 1e-3 || d1 <= 0) continue;
    min_d = std::min(min_d, std::log(static_objective(a, 0.5 * (d0 + d1), kP)) -
                                0.5 * (std::log(static_objective(a, d0, kP)) +
                                       std::log(static_objective(a, d1, kP))));
    ++n;
  }
  const ContourGrid g = contour_grid(kP, GridSpec{});
  double excess = -INFINITY;
  for (double v : g.values)
    if (!std::isnan(v)) excess = std::max(excess, v - optimum().objective);
  return {min_alpha > 0 && min_d > 0 && excess <= 1e-4,
          fmt("min alpha margin %.2e", min_alpha) + fmt(", min log-d margin %.2e", min_d) +
              fmt(", grid max - optimum %.2e", excess)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "SOCP optimum", socp_optimum},
      {2, "static harvest cells", static_cells},
      {3, "overyielding (1400 steps, d_max sweep)", overyielding},
      {4, "DOCP dilution structure", docp_structure},
      {5, "PMP consistency", pmp_consistency},
      {6, "adjoint gradient vs finite differences", gradient_oracle},
      {7, "GAS convergence over 300 days", gas_convergence},
      {8, "Gauss-Legendre observed order", integrator_order},
      {9, "concavity probes and grid bound", concavity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
