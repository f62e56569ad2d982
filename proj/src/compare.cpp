#include "consortium/compare.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "consortium/equilibria.hpp"
#include "consortium/pmp.hpp"
#include "consortium/tabular.hpp"

namespace consortium {

namespace {

constexpr std::array<const char*, 2> kRows = {"x_init", "x_star"};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

double ComparisonReport::harvest(const std::string& x0, Strategy s) const {
  for (const auto& c : cells)
    if (c.x0 == x0 && c.strategy == s) return c.harvest;
  throw std::out_of_range("comparison report: no cell " + x0);
}

double ComparisonReport::improvement_percent(const std::string& x0) const {
  const double base = harvest(x0, Strategy::Static);
  return 100.0 * (harvest(x0, Strategy::Dynamic) - base) / base;
}

std::string ComparisonReport::format() const {
  using tabular::short_number;
  std::ostringstream out;
  out << "Total harvested microalgae over t_f = " << short_number(t_f) << " days (g/L)\n";
  out << "d_max = " << short_number(d_max) << " 1/day, mesh = " << n_steps << " steps\n";
  out << "x(0)      static        dynamic       improvement\n";
  for (const char* row : kRows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-8s  %-12s  %-12s  %s%%\n", row,
                  short_number(harvest(row, Strategy::Static)).c_str(),
                  short_number(harvest(row, Strategy::Dynamic)).c_str(),
                  short_number(improvement_percent(row)).c_str());
    out << line;
  }
  return out.str();
}

CompareRun run_compare(const Scenario& scenario) {
  const ModelParams& p = scenario.params;
  CompareRun run;
  run.optimum = coordinate_ascent(p);
  const ControlPoint bar{run.optimum.alpha_bar, run.optimum.d_bar};
  const auto x_star = functional_equilibrium(bar.alpha, bar.d, p);
  if (!x_star) throw DomainError("compare: no functional equilibrium at the static optimum");
  run.initial_states = {kInitialExperiment, *x_star};

  ComparisonReport& rep = run.report;
  rep.d_max = p.d_max;
  rep.n_steps = scenario.n_steps;
  rep.t_f = scenario.t_f;
  for (std::size_t row = 0; row < 2; ++row) {
    const std::string name = kRows[row];
    try {
      run.static_runs[row] = integrate(
          run.initial_states[row], ControlSchedule::constant(scenario.t_f, scenario.n_steps, bar),
          p, scenario.method);
    } catch (const std::exception& err) {
      throw std::runtime_error("compare cell (" + name + ", static): " + err.what());
    }
    try {
      DocpSpec spec;
      spec.x0 = run.initial_states[row];
      spec.t_f = scenario.t_f;
      spec.n_steps = scenario.n_steps;
      spec.d_max = p.d_max;
      spec.initial = ControlSchedule::constant(scenario.t_f, scenario.n_steps, bar);
      spec.optimizer.max_iterations = scenario.max_iterations;
      spec.optimizer.step_rule = scenario.step_rule;
      run.dynamic_runs[row] =
          multi_start(spec, p, {scenario.starts, scenario.warm_start, scenario.seed}).best;
    } catch (const std::exception& err) {
      throw std::runtime_error("compare cell (" + name + ", dynamic): " + err.what());
    }
    rep.cells.push_back({name, Strategy::Static, run.static_runs[row].total_harvest()});
    rep.cells.push_back({name, Strategy::Dynamic, run.dynamic_runs[row].objective});
  }
  return run;
}

std::vector<std::filesystem::path> export_plot_data(const CompareRun& run, const ModelParams& p,
                                                    const std::filesystem::path& dir,
                                                    std::size_t stride) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  const ContourGrid grid = contour_grid(p, GridSpec{});
  {
    auto path = dir / "contour.csv";
    auto out = open_out(path);
    tabular::write_contour(out, grid);
    written.push_back(path);
  }
  {
    auto path = dir / "ridges.csv";
    auto out = open_out(path);
    tabular::write_ridges(out, grid);
    written.push_back(path);
  }
  for (std::size_t row = 0; row < 2; ++row) {
    const Trajectory& dyn = run.dynamic_runs[row].trajectory;
    const SwitchingSeries zeta = switching_series(dyn, integrate_costates(dyn, p), p);
    auto controls = dir / ("controls_" + std::string(kRows[row]) + ".csv");
    auto out = open_out(controls);
    tabular::write_control_series(out, dyn, zeta, run.optimum.alpha_bar, run.optimum.d_bar,
                                  stride);
    written.push_back(controls);

    auto states = dir / ("states_" + std::string(kRows[row]) + ".csv");
    auto sout = open_out(states);
    tabular::write_state_comparison(sout, dyn, run.static_runs[row], stride);
    written.push_back(states);
  }
  {
    auto path = dir / "comparison.txt";
    auto out = open_out(path);
    out << run.report.format();
    written.push_back(path);
  }
  return written;
}

}  // namespace consortium
