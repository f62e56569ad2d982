#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "consortium/model.hpp"

namespace consortium {

/// Piecewise-constant (alpha, d) on a uniform mesh of n_steps intervals.
struct ControlSchedule {
  double t_f = 20.0;
  std::vector<double> alpha;
  std::vector<double> d;

  static ControlSchedule constant(double t_f, std::size_t n_steps, ControlPoint u);

  std::size_t n_steps() const { return alpha.size(); }
  double step() const { return t_f / static_cast<double>(n_steps()); }
  ControlPoint at(std::size_t k) const { return {alpha[k], d[k]}; }

  /// Throws DomainError on size mismatch, empty mesh, t_f <= 0 or any value
  /// outside [0, 1] x [0, d_max].
  void validate(const ModelParams& p) const;
};

struct SimWarnings {
  std::size_t quota_clamps = 0;
};

struct Trajectory {
  std::vector<double> times;          // n_steps + 1 nodes, days
  std::vector<StateVector> states;    // one per node
  std::vector<ControlPoint> controls; // one per interval
  std::vector<double> harvest;        // running integral of d*c per node, g/L
  SimWarnings warnings;

  double total_harvest() const { return harvest.back(); }
  const StateVector& final_state() const { return states.back(); }
};

enum class Method { GaussLegendre2, RungeKutta4 };

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step, double residual)
      : std::runtime_error(what), step_(step), residual_(residual) {}
  std::size_t step() const { return step_; }
  double residual() const { return residual_; }

 private:
  std::size_t step_;
  double residual_;
};

// Biological state augmented with the running harvest integral.
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

/// Butcher tableau of the 2-stage Gauss-Legendre method (order 4).
struct GaussLegendre2 {
  static constexpr double kSqrt3 = 1.7320508075688772;
  static constexpr double c[2] = {0.5 - kSqrt3 / 6.0, 0.5 + kSqrt3 / 6.0};
  static constexpr double a[2][2] = {{0.25, 0.25 - kSqrt3 / 6.0},
                                     {0.25 + kSqrt3 / 6.0, 0.25}};
  static constexpr double b[2] = {0.5, 0.5};
};

struct StageSolution {
  std::array<Vec6, 2> slopes;  // K_i = f(Y_i)
  std::array<Vec6, 2> points;  // Y_i = x + h sum_j a_ij K_j
  double residual = 0.0;
  int iterations = 0;
  bool used_newton = false;
};

inline constexpr double kStageTolerance = 1e-13;
inline constexpr int kFixedPointIterations = 25;
inline constexpr int kNewtonIterations = 50;

/// Augmented right-hand side (s, e, v, q, c, harvest). Arguments below the
/// state-space floor (s, v < 0 or q < q_min) are lifted to it before the field
/// is evaluated; quota lifts are counted in `clamps` when non-null.
Vec6 augmented_rhs(const Vec6& x, const ControlPoint& u, const ModelParams& p,
                   std::size_t* clamps = nullptr);
Mat6 augmented_state_jacobian(const Vec6& x, const ControlPoint& u, const ModelParams& p);
Mat62 augmented_control_jacobian(const Vec6& x, const ModelParams& p);

/// Solves the implicit Gauss-Legendre stage equations for one step of size h:
/// fixed-point iteration, then damped Newton on the 12-dimensional stage
/// system if the residual has not dropped below 1e-13 after 25 sweeps.
/// Throws IntegrationError (step index `step`) on failure.
StageSolution solve_implicit_stage(const Vec6& x, const ControlPoint& u, double h,
                                   const ModelParams& p, std::size_t step = 0,
                                   std::size_t* clamps = nullptr);

/// One explicit RK4 step of the augmented system.
Vec6 rk4_step(const Vec6& x, const ControlPoint& u, double h, const ModelParams& p,
              std::size_t* clamps = nullptr);

/// Integrates from x0 under the schedule, holding each control constant over
/// its interval. The harvest is the sixth component of the integrated system,
/// so it inherits the order of the state scheme.
Trajectory integrate(const StateVector& x0, const ControlSchedule& schedule, const ModelParams& p,
                     Method method = Method::GaussLegendre2);

/// Same as integrate() but also returns the Gauss-Legendre stages of every
/// step, as needed for differentiating through the discretization.
struct RecordedTrajectory {
  Trajectory trajectory;
  std::vector<StageSolution> stages;
};
RecordedTrajectory integrate_recording(const StateVector& x0, const ControlSchedule& schedule,
                                       const ModelParams& p);

/// Trapezoidal rule applied to the sampled d*c values of a trajectory.
double trapezoid_harvest(const Trajectory& traj);

}  // namespace consortium
