#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "consortium/docp.hpp"
#include "consortium/scenario.hpp"
#include "consortium/socp.hpp"

namespace consortium {

enum class Strategy { Static, Dynamic };

struct ComparisonCell {
  std::string x0;  // "x_init" or "x_star"
  Strategy strategy = Strategy::Static;
  double harvest = 0.0;  // g/L over [0, t_f]
};

/// Total harvest for {x_init, x_star} x {static optimum, optimized schedule}.
struct ComparisonReport {
  std::vector<ComparisonCell> cells;
  double d_max = 0.0;
  std::size_t n_steps = 0;
  double t_f = 0.0;

  double harvest(const std::string& x0, Strategy s) const;
  /// 100 (dynamic - static) / static for that row.
  double improvement_percent(const std::string& x0) const;
  /// Human-readable table, six significant digits.
  std::string format() const;
};

struct CompareRun {
  ComparisonReport report;
  StaticSolution optimum;
  std::array<StateVector, 2> initial_states;  // x_init, x_star
  std::array<Trajectory, 2> static_runs;
  std::array<DocpSolution, 2> dynamic_runs;
};

/// Static cells integrate the constant static optimum; dynamic cells run
/// multi_start with the scenario's starts, seed and warm-start setting.
/// Errors from a cell are rethrown with the cell's coordinates.
CompareRun run_compare(const Scenario& scenario);

/// Writes plot data into `dir`:
///   contour.csv, ridges.csv              (static objective landscape)
///   controls_<x0>.csv                     (controls and switching functions)
///   states_<x0>.csv                       (dynamic vs static states)
///   comparison.txt                        (the report)
/// Returns the paths written.
std::vector<std::filesystem::path> export_plot_data(const CompareRun& run, const ModelParams& p,
                                                    const std::filesystem::path& dir,
                                                    std::size_t stride = 1);

}  // namespace consortium
