#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "consortium/model.hpp"
#include "consortium/sim.hpp"

namespace consortium {

/// Projected-gradient ascent settings. The search direction is the gradient
/// of the discrete objective divided by the mesh width, i.e. the L2 gradient
/// of the piecewise-constant control, so step sizes do not depend on n_steps.
enum class StepRule {
  Fixed,           // every line search starts from initial_step
  BarzilaiBorwein  // starts from the spectral step s.s / |s.y|, clamped
};

struct OptimizerSettings {
  std::size_t max_iterations = 5000;
  StepRule step_rule = StepRule::BarzilaiBorwein;
  double initial_step = 1.0;
  double max_step = 1e6;
  double shrink = 0.5;
  double armijo_fraction = 1e-4;
  double min_step = 1e-16;
  double projected_gradient_tol = 1e-8;
  double improvement_tol = 1e-12;
};

struct DocpSpec {
  StateVector x0;
  double t_f = 20.0;
  std::size_t n_steps = 7000;
  double d_max = 1.0;
  ControlSchedule initial;  // used as the starting iterate
  OptimizerSettings optimizer;

  void validate(const ModelParams& p) const;
};

enum class Termination { ProjectedGradient, SmallImprovement, Stalled, IterationCap };

std::string_view to_string(Termination t);

struct IterationRecord {
  std::size_t iteration = 0;
  double objective = 0.0;
  double step = 0.0;
  double projected_gradient = 0.0;
};

struct DocpSolution {
  ControlSchedule schedule;
  double objective = 0.0;  // total harvest, g/L
  Trajectory trajectory;
  double gradient_norm_projected = 0.0;
  Termination termination = Termination::IterationCap;
  std::vector<IterationRecord> trace;
  std::size_t start_index = 0;
};

struct AdjointGradient {
  double objective = 0.0;
  std::vector<double> alpha;  // dJ/d alpha_k
  std::vector<double> d;      // dJ/d d_k
};

/// Exact gradient of the Gauss-Legendre discretized harvest with respect to
/// every control value, by a backward sweep through the implicit steps.
AdjointGradient discrete_adjoint_gradient(const ControlSchedule& schedule, const StateVector& x0,
                                          const ModelParams& p);

class DocpError : public std::runtime_error {
 public:
  DocpError(const std::string& what, std::optional<ControlSchedule> iterate = std::nullopt)
      : std::runtime_error(what), iterate_(std::move(iterate)) {}
  const std::optional<ControlSchedule>& iterate() const { return iterate_; }

 private:
  std::optional<ControlSchedule> iterate_;
};

/// Maximizes the discretized harvest over all 2 n_steps control values inside
/// their boxes. The parameter set's d_max is replaced by spec.d_max.
DocpSolution transcribe_and_optimize(const DocpSpec& spec, const ModelParams& p);

struct MultiStartOptions {
  std::size_t starts = 1;
  bool warm_start = true;  // start 0 is the static optimum (alpha_bar, d_bar)
  std::uint64_t seed = 20240601;
};

struct MultiStartResult {
  DocpSolution best;
  std::vector<DocpSolution> runs;  // in start order
  std::vector<ControlPoint> starting_controls;
};

/// Runs transcribe_and_optimize from constant schedules: the static optimum
/// (if warm_start) followed by seeded uniform samples over the box. Starts run
/// concurrently; the winner is picked by (objective, start index).
MultiStartResult multi_start(const DocpSpec& spec, const ModelParams& p,
                             const MultiStartOptions& options);

}  // namespace consortium
