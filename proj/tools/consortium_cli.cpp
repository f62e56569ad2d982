// Command-line front end for the algal-bacterial consortium chemostat.
//
//   consortium simulate    constant-control (or scenario) simulation
//   consortium equilibria  equilibrium table over (alpha, d)
//   consortium socp        static optimum and objective contours
//   consortium docp        optimized time-varying schedule
//   consortium pmp-check   switching-function audit of a schedule file
//   consortium compare     static vs dynamic harvest table and plot data

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "consortium/compare.hpp"
#include "consortium/docp.hpp"
#include "consortium/equilibria.hpp"
#include "consortium/pmp.hpp"
#include "consortium/scenario.hpp"
#include "consortium/sim.hpp"
#include "consortium/socp.hpp"
#include "consortium/tabular.hpp"

namespace fs = std::filesystem;
using namespace consortium;
using tabular::short_number;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::string x0;
  std::optional<double> t_f;
  std::optional<long long> steps;
  std::optional<double> d_max;
  std::optional<long long> stride;
};

// One JSON object on stderr so scripts can parse failures.
int report_error(const std::string& message, int code) {
  nlohmann::json line = {{"status", "error"}, {"message", message}};
  std::cerr << line.dump() << std::endl;
  return code;
}

Scenario load(const Common& c) {
  Scenario s = c.config.empty() ? Scenario{} : load_scenario(c.config);
  if (!c.x0.empty()) set_initial_condition(s, c.x0);
  if (c.t_f) {
    if (!(*c.t_f > 0.0)) throw ConfigError("--tf must be > 0");
    s.t_f = *c.t_f;
  }
  if (c.steps) {
    if (*c.steps < 1) throw ConfigError("--steps must be >= 1");
    s.n_steps = static_cast<std::size_t>(*c.steps);
  }
  if (c.d_max) {
    if (!(*c.d_max > 0.0)) throw ConfigError("--dmax must be > 0");
    s.params.d_max = *c.d_max;
  }
  if (c.stride) {
    if (*c.stride < 1) throw ConfigError("--stride must be >= 1");
    s.stride = static_cast<std::size_t>(*c.stride);
  }
  s.params.validate();
  return s;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool with_run_flags) {
  cmd->add_option("--config", c.config, "Scenario key-value file");
  cmd->add_option("--out", c.out, "Output directory");
  if (!with_run_flags) return;
  cmd->add_option("--x0", c.x0, "x_init, x_star, or five comma-separated values");
  cmd->add_option("--tf", c.t_f, "Horizon in days");
  cmd->add_option("--steps", c.steps, "Mesh size");
  cmd->add_option("--dmax", c.d_max, "Upper bound on the dilution rate (1/day)");
  cmd->add_option("--stride", c.stride, "Write every n-th mesh node");
}

int run_simulate(const Common& c, std::optional<double> alpha, std::optional<double> d,
                 const std::string& method) {
  Scenario s = load(c);
  if (alpha) s.alpha = alpha;
  if (d) s.d = d;
  if (method == "rk4") s.method = Method::RungeKutta4;
  ControlPoint u;
  if (s.alpha && s.d) {
    u = {*s.alpha, *s.d};
  } else {
    const StaticSolution opt = coordinate_ascent(s.params);
    u = {s.alpha.value_or(opt.alpha_bar), s.d.value_or(opt.d_bar)};
  }
  const Trajectory traj = integrate(resolve_initial_state(s),
                                    ControlSchedule::constant(s.t_f, s.n_steps, u), s.params,
                                    s.method);
  auto out = open_out(c.out, "trajectory.csv");
  tabular::write_trajectory(out, traj, s.stride);
  std::printf("alpha = %s, d = %s, t_f = %s, steps = %zu\n", short_number(u.alpha).c_str(),
              short_number(u.d).c_str(), short_number(s.t_f).c_str(), s.n_steps);
  std::printf("total harvest = %s g/L\n", short_number(traj.total_harvest()).c_str());
  if (traj.warnings.quota_clamps > 0)
    std::printf("warning: quota clamped %zu times\n", traj.warnings.quota_clamps);
  return 0;
}

int run_equilibria(const Common& c, std::vector<double> alphas, std::vector<double> ds) {
  const Scenario s = load(c);
  if (alphas.empty()) alphas.push_back(coordinate_ascent(s.params).alpha_bar);
  if (ds.empty())
    for (int k = 1; k <= 40; ++k) ds.push_back(s.params.d_max * 1.5 * k / 40.0);
  std::vector<EquilibriumReport> rows;
  for (double a : alphas) {
    for (double d : ds) {
      try {
        rows.push_back(classify_stability(a, d, s.params));
      } catch (const DomainError& err) {
        std::fprintf(stderr, "skipping (alpha=%g, d=%g): %s\n", a, d, err.what());
      }
    }
  }
  auto out = open_out(c.out, "equilibria.csv");
  tabular::write_equilibrium_reports(out, rows);
  std::printf("%zu rows written to %s\n", rows.size(), (fs::path(c.out) / "equilibria.csv").c_str());
  return 0;
}

int run_socp(const Common& c, std::size_t grid) {
  const Scenario s = load(c);
  const StaticSolution opt = coordinate_ascent(s.params);
  std::printf("alpha_bar = %s\nd_bar = %s 1/day\nf0_star = %s g/L/day\nsweeps = %zu\n",
              short_number(opt.alpha_bar).c_str(), short_number(opt.d_bar).c_str(),
              short_number(opt.objective).c_str(), opt.iterations);
  const ContourGrid g = contour_grid(s.params, GridSpec{grid, grid, 0.0});
  auto out = open_out(c.out, "contour.csv");
  tabular::write_contour(out, g);
  auto ridges = open_out(c.out, "ridges.csv");
  tabular::write_ridges(ridges, g);
  return 0;
}

int run_docp(const Common& c, std::optional<std::size_t> starts, std::optional<bool> warm,
             std::optional<std::uint64_t> seed, std::optional<std::size_t> max_iter) {
  Scenario s = load(c);
  if (starts) s.starts = *starts;
  if (warm) s.warm_start = *warm;
  if (seed) s.seed = *seed;
  if (max_iter) s.max_iterations = *max_iter;
  const StaticSolution opt = coordinate_ascent(s.params);
  DocpSpec spec;
  spec.x0 = resolve_initial_state(s);
  spec.t_f = s.t_f;
  spec.n_steps = s.n_steps;
  spec.d_max = s.params.d_max;
  spec.initial = ControlSchedule::constant(s.t_f, s.n_steps, {opt.alpha_bar, opt.d_bar});
  spec.optimizer.max_iterations = s.max_iterations;
  spec.optimizer.step_rule = s.step_rule;
  const MultiStartResult res = multi_start(spec, s.params, {s.starts, s.warm_start, s.seed});
  const DocpSolution& best = res.best;

  auto traj_out = open_out(c.out, "trajectory.csv");
  tabular::write_trajectory(traj_out, best.trajectory, s.stride);
  const SwitchingSeries zeta =
      switching_series(best.trajectory, integrate_costates(best.trajectory, s.params), s.params);
  auto ctrl_out = open_out(c.out, "controls.csv");
  tabular::write_control_series(ctrl_out, best.trajectory, zeta, opt.alpha_bar, opt.d_bar,
                                s.stride);

  const Trajectory baseline =
      integrate(spec.x0, ControlSchedule::constant(s.t_f, s.n_steps, {opt.alpha_bar, opt.d_bar}),
                s.params);
  std::printf("x0 = %s, t_f = %s, steps = %zu, d_max = %s\n", s.x0.c_str(),
              short_number(s.t_f).c_str(), s.n_steps, short_number(s.params.d_max).c_str());
  for (const auto& r : res.runs)
    std::printf("start %zu (alpha=%s, d=%s): harvest %s g/L, %zu iterations, %s\n", r.start_index,
                short_number(res.starting_controls[r.start_index].alpha).c_str(),
                short_number(res.starting_controls[r.start_index].d).c_str(),
                short_number(r.objective).c_str(), r.trace.size() - 1,
                std::string(to_string(r.termination)).c_str());
  std::printf("best harvest = %s g/L (static %s g/L, %s%%)\n",
              short_number(best.objective).c_str(),
              short_number(baseline.total_harvest()).c_str(),
              short_number(100.0 * (best.objective / baseline.total_harvest() - 1.0)).c_str());
  return 0;
}

int run_pmp_check(const Common& c, const std::string& input, std::optional<double> eps) {
  Scenario s = load(c);
  if (eps) s.eps_sing = *eps;
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  const tabular::TrajectoryFile file = tabular::read_trajectory(in);
  ModelParams p = s.params;
  const ControlSchedule schedule = file.schedule();
  double peak_d = 0.0;
  for (double d : schedule.d) peak_d = std::max(peak_d, d);
  if (peak_d > p.d_max) p.d_max = peak_d;

  const Trajectory traj = integrate(file.initial_state(), schedule, p);
  const CostatePath costates = integrate_costates(traj, p);
  const ArcClassification arcs = classify_arcs(traj, costates, s.eps_sing, p);
  const SwitchingSeries zeta = switching_series(traj, costates, p);
  auto nodes = open_out(c.out, "pmp_nodes.csv");
  tabular::write_pmp_nodes(nodes, zeta, arcs, s.stride);

  std::ostringstream summary;
  summary << "intervals = " << schedule.n_steps() << "\n"
          << "d_max = " << short_number(p.d_max) << "\n"
          << "eps_sing (relative) = " << short_number(s.eps_sing) << "\n"
          << "alpha: consistency = " << short_number(arcs.alpha.consistency()) << " ("
          << arcs.alpha.consistent << "/" << arcs.alpha.nonsingular << " nonsingular)\n"
          << "d: consistency = " << short_number(arcs.d.consistency()) << " ("
          << arcs.d.consistent << "/" << arcs.d.nonsingular << " nonsingular)\n"
          << "zeta_alpha(t_f) = " << short_number(arcs.zeta_alpha_tf) << "\n"
          << "zeta_d(t_f) = " << short_number(arcs.zeta_d_tf)
          << ", c(t_f) = " << short_number(traj.final_state().c) << "\n"
          << "d ends on a bang_high arc = " << (arcs.d_ends_bang_high ? "yes" : "no") << "\n"
          << "hamiltonian drift = " << short_number(arcs.hamiltonian_drift) << "\n"
          << "d arcs:";
  for (const ArcRun& r : compress_runs(arcs.d.labels))
    summary << " " << to_string(r.label) << "[" << r.first << "," << r.last << "]";
  summary << "\n";
  auto sum_out = open_out(c.out, "pmp_summary.txt");
  sum_out << summary.str();
  std::cout << summary.str();
  return 0;
}

int run_compare_cmd(const Common& c, std::optional<std::size_t> starts) {
  Scenario s = load(c);
  if (starts) s.starts = *starts;
  const CompareRun run = run_compare(s);
  export_plot_data(run, s.params, c.out, s.stride);
  std::cout << run.report.format();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algal-bacterial consortium chemostat: simulation and optimal control"};
  app.require_subcommand(1);

  Common sim_c, eq_c, socp_c, docp_c, pmp_c, cmp_c;

  auto* sim = app.add_subcommand("simulate", "Integrate the model under constant controls");
  add_common(sim, sim_c, true);
  std::optional<double> sim_alpha, sim_d;
  std::string sim_method = "gauss2";
  sim->add_option("--alpha", sim_alpha, "Resource allocation (default: static optimum)");
  sim->add_option("--d", sim_d, "Dilution rate (default: static optimum)");
  sim->add_option("--method", sim_method, "gauss2 or rk4")->check(CLI::IsMember({"gauss2", "rk4"}));

  auto* eq = app.add_subcommand("equilibria", "Equilibria, thresholds and stability labels");
  add_common(eq, eq_c, true);
  std::vector<double> eq_alpha, eq_d;
  eq->add_option("--alpha", eq_alpha, "Allocation values")->delimiter(',');
  eq->add_option("--d", eq_d, "Dilution rates")->delimiter(',');

  auto* socp = app.add_subcommand("socp", "Static optimal control");
  add_common(socp, socp_c, true);
  std::size_t grid = 200;
  socp->add_option("--grid", grid, "Contour grid resolution per axis");

  auto* docp = app.add_subcommand("docp", "Dynamic optimal control by direct transcription");
  add_common(docp, docp_c, true);
  std::optional<std::size_t> starts, max_iter;
  std::optional<bool> warm;
  std::optional<std::uint64_t> seed;
  docp->add_option("--starts", starts, "Number of starts (warm start included)");
  docp->add_option("--warm-start", warm, "Include the static optimum as start 0 (true/false)");
  docp->add_option("--seed", seed, "Seed for the random starts");
  docp->add_option("--max-iter", max_iter, "Iteration cap per start");

  auto* pmp = app.add_subcommand("pmp-check", "Audit a schedule against the maximum principle");
  add_common(pmp, pmp_c, false);
  std::string pmp_input;
  std::optional<double> eps;
  pmp->add_option("--input", pmp_input, "Trajectory file written by simulate or docp")->required();
  pmp->add_option("--eps", eps, "Singular threshold relative to max |zeta|");
  pmp->add_option("--dmax", pmp_c.d_max, "Upper bound on the dilution rate (1/day)");

  auto* cmp = app.add_subcommand("compare", "Static vs dynamic harvest from x_init and x_star");
  add_common(cmp, cmp_c, true);
  std::optional<std::size_t> cmp_starts;
  cmp->add_option("--starts", cmp_starts, "Starts per dynamic cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    return report_error(e.what(), 2);
  }

  try {
    if (*sim) return run_simulate(sim_c, sim_alpha, sim_d, sim_method);
    if (*eq) return run_equilibria(eq_c, eq_alpha, eq_d);
    if (*socp) return run_socp(socp_c, grid);
    if (*docp) return run_docp(docp_c, starts, warm, seed, max_iter);
    if (*pmp) return run_pmp_check(pmp_c, pmp_input, eps);
    if (*cmp) return run_compare_cmd(cmp_c, cmp_starts);
  } catch (const std::exception& err) {
    return report_error(err.what(), 1);
  }
  return 0;
}
