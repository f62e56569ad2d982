#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "consortium/model.hpp"

namespace consortium {

/// Equilibrium harvest rate f0*(alpha, d) = (s_in - psi_alpha^{-1}(d)) alpha beta gamma d / mu^{-1}(d),
/// g/L/day. Throws DomainError when the functional equilibrium does not exist.
double static_objective(double alpha, double d, const ModelParams& p);

/// Same value assembled from the equilibrium point, d * c*(alpha, d).
double static_objective_from_equilibrium(double alpha, double d, const ModelParams& p);

/// True when (alpha, d) lies in the open set where x* exists.
bool static_feasible(double alpha, double d, const ModelParams& p);

inline constexpr double kLineSearchTolerance = 1e-10;

/// Maximizer of a unimodal function on the open interval (lo, hi) by golden
/// section. Only interior points are evaluated.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol = kLineSearchTolerance);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The open set of alpha for which x* exists at this d. Empty intervals throw.
Interval feasible_alpha_interval(double d, const ModelParams& p);

double maximize_alpha(double d, const ModelParams& p);
double maximize_d(double alpha, const ModelParams& p);

struct AscentRecord {
  double alpha = 0.0;
  double d = 0.0;
  double objective = 0.0;
};

struct StaticSolution {
  double alpha_bar = 0.0;
  double d_bar = 0.0;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<AscentRecord> trace;
};

class AscentError : public std::runtime_error {
 public:
  AscentError(const std::string& what, std::vector<AscentRecord> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<AscentRecord>& trace() const { return trace_; }

 private:
  std::vector<AscentRecord> trace_;
};

/// Alternating maximization over alpha then d until a sweep improves the
/// objective by less than `tol`.
StaticSolution coordinate_ascent(const ModelParams& p, double alpha0 = 0.5, double d0 = 0.2,
                                 std::size_t max_sweeps = 200, double tol = 1e-12);

struct GridSpec {
  std::size_t n_alpha = 200;
  std::size_t n_d = 200;
  double d_hi = 0.0;  // 0 means use d_max
};

inline constexpr double kInfeasible = std::numeric_limits<double>::quiet_NaN();

struct ContourGrid {
  std::vector<double> alphas;  // cell centres in (0, 1)
  std::vector<double> ds;      // cell centres in (0, d_hi)
  // values[i * ds.size() + j] at (alphas[i], ds[j]); NaN where x* does not exist.
  std::vector<double> values;
  // argmax over alpha for each d (NaN where no alpha is feasible).
  std::vector<double> ridge_alpha_of_d;
  // argmax over d for each alpha.
  std::vector<double> ridge_d_of_alpha;

  double at(std::size_t i, std::size_t j) const { return values[i * ds.size() + j]; }
  bool feasible(std::size_t i, std::size_t j) const;
};

ContourGrid contour_grid(const ModelParams& p, const GridSpec& spec);

}  // namespace consortium
