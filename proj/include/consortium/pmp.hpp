#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "consortium/model.hpp"
#include "consortium/sim.hpp"

namespace consortium {

// Costates (lambda_s, lambda_e, lambda_v, lambda_q, lambda_c).
using Costate = Vec5;

/// H = <lambda, f(x, u)> + lambda0 d c.
double hamiltonian(const StateVector& x, const Costate& lambda, double lambda0,
                   const ControlPoint& u, const ModelParams& p);

/// H written as H_tilde + zeta_alpha alpha + zeta_d d.
struct AffineHamiltonian {
  double h_tilde = 0.0;
  double zeta_alpha = 0.0;
  double zeta_d = 0.0;

  double operator()(const ControlPoint& u) const {
    return h_tilde + zeta_alpha * u.alpha + zeta_d * u.d;
  }
};

AffineHamiltonian affine_hamiltonian(const StateVector& x, const Costate& lambda, double lambda0,
                                     const ModelParams& p);

struct SwitchingFunctions {
  double zeta_alpha = 0.0;  // (beta lambda_v - lambda_e) phi(s) e
  double zeta_d = 0.0;      // lambda_s (s_in - s) - lambda_e e - lambda_v v + (lambda0 - lambda_c) c
};

SwitchingFunctions switching_functions(const StateVector& x, const Costate& lambda,
                                       double lambda0, const ModelParams& p);

/// -dH/dx from the hand-derived partial derivatives.
Costate costate_rhs(const StateVector& x, const Costate& lambda, double lambda0,
                    const ControlPoint& u, const ModelParams& p);

/// max over admissible v of H(v) minus H(u); zero when u maximizes H.
double hamiltonian_gap(const StateVector& x, const Costate& lambda, double lambda0,
                       const ControlPoint& u, const ModelParams& p);

struct CostatePath {
  double lambda0 = 1.0;
  std::vector<Costate> nodes;  // one per mesh node, nodes.back() == 0
  // Per interval: states and costates at the two Gauss points.
  std::vector<std::array<StateVector, 2>> stage_states;
  std::vector<std::array<Costate, 2>> stage_costates;
};

/// Integrates the costate equations backward from lambda(t_f) = 0 on the
/// trajectory's mesh with the 2-stage Gauss-Legendre scheme. States between
/// nodes come from cubic Hermite interpolation of the forward trajectory.
CostatePath integrate_costates(const Trajectory& traj, const ModelParams& p, double lambda0 = 1.0);

enum class ArcLabel { BangLow, BangHigh, Singular };

std::string_view to_string(ArcLabel l);

struct ControlArcs {
  std::vector<ArcLabel> labels;       // per interval
  std::vector<double> zeta;           // interval mean of the switching function
  double epsilon = 0.0;               // absolute singular threshold used
  std::size_t nonsingular = 0;
  std::size_t consistent = 0;         // nonsingular intervals with matching saturation

  double consistency() const {
    return nonsingular == 0 ? 1.0 : static_cast<double>(consistent) / nonsingular;
  }
};

struct ArcRun {
  ArcLabel label;
  std::size_t first = 0;  // interval index
  std::size_t last = 0;   // inclusive
};

std::vector<ArcRun> compress_runs(const std::vector<ArcLabel>& labels);

struct ArcClassification {
  ControlArcs alpha;
  ControlArcs d;
  double zeta_alpha_tf = 0.0;
  double zeta_d_tf = 0.0;
  bool d_ends_bang_high = false;
  double hamiltonian_drift = 0.0;  // max - min of nodal H, diagnostic only
  double epsilon_relative = 0.0;

  /// Combined fraction over both controls.
  double consistency() const;
};

inline constexpr double kDefaultSingularEpsilon = 1e-3;

/// Labels each interval per control from the interval-mean switching function:
/// bang_high above +eps, bang_low below -eps, singular in between, with eps
/// taken relative to max |zeta| over the horizon. Throws DomainError if the
/// meshes differ.
ArcClassification classify_arcs(const Trajectory& traj, const CostatePath& costates,
                                double epsilon_relative, const ModelParams& p);

/// Phases of the dilution profile: a leading block with d <= low_frac d_max,
/// a trailing block with d >= high_frac d_max, and what lies between.
struct DilutionPhases {
  std::size_t initial_low_end = 0;   // one past the last interval of the leading block
  std::size_t terminal_high_begin = 0;
  bool three_phase = false;
};

DilutionPhases dilution_phases(const ControlSchedule& schedule, double d_max,
                               double low_frac = 1e-3, double high_frac = 0.999);

/// Node-wise series used for plots and the pmp-check report.
struct SwitchingSeries {
  std::vector<double> t;
  std::vector<double> zeta_alpha;
  std::vector<double> zeta_d;
  std::vector<double> hamiltonian;
};

SwitchingSeries switching_series(const Trajectory& traj, const CostatePath& costates,
                                 const ModelParams& p);

}  // namespace consortium
