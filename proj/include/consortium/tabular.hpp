#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "consortium/equilibria.hpp"
#include "consortium/pmp.hpp"
#include "consortium/sim.hpp"
#include "consortium/socp.hpp"

// Comma-separated text tables with a single header row. Data files carry
// round-trip precision; NaN marks missing or infeasible values.
namespace consortium::tabular {

inline constexpr const char* kTrajectoryHeader = "t,s,e,v,q,c,alpha,d,harvest";

/// One row per mesh node (every `stride`-th node plus the last one). Row k
/// carries the control of interval k; the final node repeats the last control.
void write_trajectory(std::ostream& out, const Trajectory& traj, std::size_t stride = 1);

/// Inverse of write_trajectory for undecimated files: rebuilds the initial
/// state and the control schedule (t_f from the last row).
struct TrajectoryFile {
  std::vector<double> t;
  std::vector<StateVector> states;
  std::vector<ControlPoint> controls;  // one per row
  std::vector<double> harvest;

  StateVector initial_state() const { return states.front(); }
  ControlSchedule schedule() const;
};
TrajectoryFile read_trajectory(std::istream& in);

inline constexpr const char* kEquilibriumHeader =
    "alpha,d,x10_exists,x11_exists,s,e,v,q,c,d1,d2,gas";

/// The state columns hold the GAS point of each report.
void write_equilibrium_reports(std::ostream& out, const std::vector<EquilibriumReport>& rows);

inline constexpr const char* kContourHeader = "alpha,d,f0_star,feasible";
inline constexpr const char* kRidgeHeader = "kind,alpha,d";

void write_contour(std::ostream& out, const ContourGrid& grid);
/// Ridge curves argmax_alpha(d) ("alpha_of_d") and argmax_d(alpha) ("d_of_alpha").
void write_ridges(std::ostream& out, const ContourGrid& grid);

inline constexpr const char* kControlSeriesHeader = "t,alpha,zeta_alpha,d,zeta_d,alpha_bar,d_bar";

/// Controls and switching functions per node, with the static optimum for reference.
void write_control_series(std::ostream& out, const Trajectory& traj, const SwitchingSeries& zeta,
                          double alpha_bar, double d_bar, std::size_t stride = 1);

inline constexpr const char* kPmpHeader = "t,zeta_alpha,zeta_d,H,alpha_label,d_label";

/// Per node; labels belong to the interval starting at the node.
void write_pmp_nodes(std::ostream& out, const SwitchingSeries& zeta,
                     const ArcClassification& arcs, std::size_t stride = 1);

/// Paired state series for two trajectories on the same mesh:
/// t, s_dynamic, s_static, ..., c_dynamic, c_static, harvest_dynamic, harvest_static.
void write_state_comparison(std::ostream& out, const Trajectory& dynamic, const Trajectory& fixed,
                            std::size_t stride = 1);

/// Six significant digits, for reports.
std::string short_number(double v);

}  // namespace consortium::tabular
