#include "consortium/tabular.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace consortium::tabular {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Row>
void for_strided(std::size_t count, std::size_t stride, Row row) {
  if (stride == 0) stride = 1;
  for (std::size_t k = 0; k < count; k += stride) row(k);
  if (count > 0 && (count - 1) % stride != 0) row(count - 1);
}

std::vector<double> split_numbers(const std::string& line, std::size_t expected, int lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell == "nan") {
      out.push_back(NAN);
      continue;
    }
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw std::runtime_error("line " + std::to_string(lineno) + ": bad number '" + cell + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw std::runtime_error("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(expected) + " columns");
  return out;
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj, std::size_t stride) {
  out << kTrajectoryHeader << "\n";
  const std::size_t n = traj.controls.size();
  for_strided(traj.states.size(), stride, [&](std::size_t k) {
    const StateVector& x = traj.states[k];
    const ControlPoint& u = traj.controls[std::min(k, n - 1)];
    out << num(traj.times[k]) << ',' << num(x.s) << ',' << num(x.e) << ',' << num(x.v) << ','
        << num(x.q) << ',' << num(x.c) << ',' << num(u.alpha) << ',' << num(u.d) << ','
        << num(traj.harvest[k]) << "\n";
  });
}

ControlSchedule TrajectoryFile::schedule() const {
  if (t.size() < 2) throw std::runtime_error("trajectory file needs at least two rows");
  ControlSchedule s;
  s.t_f = t.back() - t.front();
  for (std::size_t k = 0; k + 1 < controls.size(); ++k) {
    s.alpha.push_back(controls[k].alpha);
    s.d.push_back(controls[k].d);
  }
  return s;
}

TrajectoryFile read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw std::runtime_error("trajectory file: missing header '" + std::string(kTrajectoryHeader) +
                             "'");
  TrajectoryFile f;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto v = split_numbers(line, 9, lineno);
    f.t.push_back(v[0]);
    f.states.push_back({v[1], v[2], v[3], v[4], v[5]});
    f.controls.push_back({v[6], v[7]});
    f.harvest.push_back(v[8]);
  }
  if (f.t.size() < 2) throw std::runtime_error("trajectory file: fewer than two rows");
  return f;
}

void write_equilibrium_reports(std::ostream& out, const std::vector<EquilibriumReport>& rows) {
  out << kEquilibriumHeader << "\n";
  for (const auto& r : rows) {
    const StateVector& x = r.gas_point();
    out << num(r.alpha) << ',' << num(r.d) << ',' << (r.algal_washout ? 1 : 0) << ','
        << (r.functional ? 1 : 0) << ',' << num(x.s) << ',' << num(x.e) << ',' << num(x.v) << ','
        << num(x.q) << ',' << num(x.c) << ',' << num(r.d1) << ',' << num(r.d2) << ','
        << r.gas_label() << "\n";
  }
}

void write_contour(std::ostream& out, const ContourGrid& grid) {
  out << kContourHeader << "\n";
  for (std::size_t i = 0; i < grid.alphas.size(); ++i)
    for (std::size_t j = 0; j < grid.ds.size(); ++j)
      out << num(grid.alphas[i]) << ',' << num(grid.ds[j]) << ',' << num(grid.at(i, j)) << ','
          << (grid.feasible(i, j) ? 1 : 0) << "\n";
}

void write_ridges(std::ostream& out, const ContourGrid& grid) {
  out << kRidgeHeader << "\n";
  for (std::size_t j = 0; j < grid.ds.size(); ++j)
    out << "alpha_of_d," << num(grid.ridge_alpha_of_d[j]) << ',' << num(grid.ds[j]) << "\n";
  for (std::size_t i = 0; i < grid.alphas.size(); ++i)
    out << "d_of_alpha," << num(grid.alphas[i]) << ',' << num(grid.ridge_d_of_alpha[i]) << "\n";
}

void write_control_series(std::ostream& out, const Trajectory& traj, const SwitchingSeries& zeta,
                          double alpha_bar, double d_bar, std::size_t stride) {
  out << kControlSeriesHeader << "\n";
  const std::size_t n = traj.controls.size();
  for_strided(traj.states.size(), stride, [&](std::size_t k) {
    const ControlPoint& u = traj.controls[std::min(k, n - 1)];
    out << num(traj.times[k]) << ',' << num(u.alpha) << ',' << num(zeta.zeta_alpha[k]) << ','
        << num(u.d) << ',' << num(zeta.zeta_d[k]) << ',' << num(alpha_bar) << ',' << num(d_bar)
        << "\n";
  });
}

void write_pmp_nodes(std::ostream& out, const SwitchingSeries& zeta,
                     const ArcClassification& arcs, std::size_t stride) {
  out << kPmpHeader << "\n";
  const std::size_t n = arcs.alpha.labels.size();
  for_strided(zeta.t.size(), stride, [&](std::size_t k) {
    const std::size_t i = std::min(k, n - 1);
    out << num(zeta.t[k]) << ',' << num(zeta.zeta_alpha[k]) << ',' << num(zeta.zeta_d[k]) << ','
        << num(zeta.hamiltonian[k]) << ',' << to_string(arcs.alpha.labels[i]) << ','
        << to_string(arcs.d.labels[i]) << "\n";
  });
}

void write_state_comparison(std::ostream& out, const Trajectory& dynamic, const Trajectory& fixed,
                            std::size_t stride) {
  if (dynamic.states.size() != fixed.states.size())
    throw std::runtime_error("state comparison: trajectories on different meshes");
  out << "t,s_dynamic,s_static,e_dynamic,e_static,v_dynamic,v_static,q_dynamic,q_static,"
         "c_dynamic,c_static,harvest_dynamic,harvest_static\n";
  for_strided(dynamic.states.size(), stride, [&](std::size_t k) {
    const StateVector& a = dynamic.states[k];
    const StateVector& b = fixed.states[k];
    out << num(dynamic.times[k]) << ',' << num(a.s) << ',' << num(b.s) << ',' << num(a.e) << ','
        << num(b.e) << ',' << num(a.v) << ',' << num(b.v) << ',' << num(a.q) << ',' << num(b.q)
        << ',' << num(a.c) << ',' << num(b.c) << ',' << num(dynamic.harvest[k]) << ','
        << num(fixed.harvest[k]) << "\n";
  });
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace consortium::tabular
