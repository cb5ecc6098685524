#pragma once

#include <optional>
#include <vector>

#include "hetform/analysis.hpp"

namespace hetform {

struct SimParams {
  /// Zero selects default_dt().
  double dt = 0.0;
  double t_end = 10.0;
  /// Zero selects a stride that keeps roughly 10^4 samples.
  int record_every = 0;
  double convergence_tol = 1e-6;
  /// Trailing samples used by classify_regime(). Zero means 20% of the record.
  int classify_window = 0;
  /// Link-match tolerance, relative to max(1, d*max).
  double link_tol = 1e-4;
  /// Upper bound on dt times the local stiffness estimate.
  double stability_budget = 0.1;
};

/// Largest local rate of the linearized link dynamics, estimated as
/// max(K_d (3 dmax^2 + d*max^2), K_b / dmin) over the initial links.
double stiffness_estimate(const SetupSpec& spec, const Configuration& p0);

/// min(1e-3 min(1/K_b, 1/(K_d d*max^2)), budget / stiffness).
double default_dt(const SetupSpec& spec, const Configuration& p0, double budget = 0.1);

/// Throws InvalidSetup when the parameters are unusable.
void validate(const SimParams& params, const SetupSpec& spec, const Configuration& p0);

enum class RegimeKind { ConvergedCorrect, ConvergedFlipped, ConvergedMoving, NotConverged };

std::string_view to_string(RegimeKind k);

struct RegimeClassification {
  RegimeKind kind = RegimeKind::NotConverged;
  /// Index into moving_set(spec) for ConvergedMoving.
  std::optional<int> moving_index;
  Vec2 final_velocity = Vec2::Zero();
  ErrorVector final_errors;
  double velocity_dispersion = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Configuration> configs;
  std::vector<ErrorVector> errors;
  std::vector<Stacked> velocities;
  /// 1D1B Lyapunov function, summed robot potentials otherwise.
  std::vector<double> lyapunov;
  bool lyapunov_diagnostic_only = false;
  RegimeClassification terminal;

  std::size_t size() const { return times.size(); }
};

/// Fixed-step RK4 of closed_loop_rhs. Throws CoincidentRobots (with the time
/// of failure) when linked robots come within 1e-6 d*min, NonFiniteState on
/// overflow.
Trajectory integrate(const SetupSpec& spec, const Configuration& p0, const SimParams& params);

RegimeClassification classify_regime(const Trajectory& traj, const SetupSpec& spec,
                                     const SimParams& params = {});

struct LyapunovSeries {
  std::vector<double> V;
  /// Five-point central difference; NaN at the two samples on each end.
  std::vector<double> Vdot;
  bool diagnostic_only = false;
};

LyapunovSeries lyapunov_series(const Trajectory& traj, const SetupSpec& spec);

}  // namespace hetform
