#include "hetform/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetform/errors.hpp"

namespace hetform {
namespace {

struct LinkedPair {
  int a;
  int b;
};

std::vector<LinkedPair> linked_pairs(Topology t) {
  if (robot_count(t) == 2) return {{0, 1}};
  return {{0, 1}, {0, 2}};
}

double min_link_distance(const Configuration& c, Topology t, LinkedPair* which) {
  double best = std::numeric_limits<double>::infinity();
  for (const LinkedPair& lp : linked_pairs(t)) {
    const double d = (c.position(lp.b) - c.position(lp.a)).norm();
    if (d < best) {
      best = d;
      if (which) *which = lp;
    }
  }
  return best;
}

int resolve_stride(const SimParams& params, long long steps) {
  if (params.record_every > 0) return params.record_every;
  return static_cast<int>(std::max<long long>(1, steps / 10000));
}

}  // namespace

std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::ConvergedCorrect: return "ConvergedCorrect";
    case RegimeKind::ConvergedFlipped: return "ConvergedFlipped";
    case RegimeKind::ConvergedMoving: return "ConvergedMoving";
    case RegimeKind::NotConverged: return "NotConverged";
  }
  return "?";
}

double stiffness_estimate(const SetupSpec& spec, const Configuration& p0) {
  double dmax = spec.max_distance();
  double dmin = std::numeric_limits<double>::infinity();
  for (const LinkedPair& lp : linked_pairs(spec.topology)) {
    const double d = (p0.position(lp.b) - p0.position(lp.a)).norm();
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  const double dstar = spec.max_distance();
  return std::max(spec.K_d * (3.0 * dmax * dmax + dstar * dstar), spec.K_b / dmin);
}

double default_dt(const SetupSpec& spec, const Configuration& p0, double budget) {
  const double dstar = spec.max_distance();
  const double base = 1e-3 * std::min(1.0 / spec.K_b, 1.0 / (spec.K_d * dstar * dstar));
  return std::min(base, budget / stiffness_estimate(spec, p0));
}

void validate(const SimParams& params, const SetupSpec& spec, const Configuration& p0) {
  if (p0.size() != spec.robots()) throw InvalidSetup("initial configuration has wrong robot count");
  if (!p0.all_finite()) throw InvalidSetup("initial configuration is not finite");
  if (params.dt < 0.0 || !std::isfinite(params.dt)) throw InvalidSetup("dt must be positive");
  const double dt = params.dt > 0.0 ? params.dt : default_dt(spec, p0, params.stability_budget);
  if (!(params.t_end >= dt)) throw InvalidSetup("t_end must be at least dt");
  if (params.record_every < 0) throw InvalidSetup("record_every must be positive");
  if (params.classify_window < 0) throw InvalidSetup("classify_window must be positive");
  if (!(params.convergence_tol > 0.0)) throw InvalidSetup("convergence_tol must be positive");
  if (!(params.stability_budget > 0.0)) throw InvalidSetup("stability_budget must be positive");
  // The slack lets the auto-selected dt = budget / stiffness pass after rounding.
  if (dt * stiffness_estimate(spec, p0) > params.stability_budget * (1.0 + 1e-12)) {
    throw InvalidSetup("dt exceeds the stability budget for this configuration");
  }
}

Trajectory integrate(const SetupSpec& spec, const Configuration& p0, const SimParams& params) {
  spec.validate();
  LinkedPair pair{0, 1};
  if (p0.size() == spec.robots() && min_link_distance(p0, spec.topology, &pair) < kCoincidenceTol) {
    throw CoincidentRobots(pair.a + 1, pair.b + 1, 0.0);
  }
  validate(params, spec, p0);

  Trajectory traj;
  traj.dt = params.dt > 0.0 ? params.dt : default_dt(spec, p0, params.stability_budget);
  traj.lyapunov_diagnostic_only = spec.topology != Topology::OneD_OneB;
  const double dt = traj.dt;
  const long long steps = std::max<long long>(1, std::llround(params.t_end / dt));
  const int stride = resolve_stride(params, steps);
  const double collision = 1e-6 * spec.min_distance();

  const std::size_t expected = static_cast<std::size_t>(steps / stride + 2);
  traj.times.reserve(expected);
  traj.configs.reserve(expected);
  traj.errors.reserve(expected);
  traj.velocities.reserve(expected);
  traj.lyapunov.reserve(expected);

  auto rhs = [&](const Stacked& p, double t) {
    try {
      return closed_loop_rhs(Configuration(p), spec);
    } catch (const CoincidentRobots& e) {
      throw CoincidentRobots(e.first(), e.second(), t);
    }
  };

  auto record = [&](const Configuration& c, double t, const Stacked& v) {
    const LinkState links = link_state(c, spec.topology);
    traj.times.push_back(t);
    traj.configs.push_back(c);
    traj.errors.push_back(error_vector(links, spec));
    traj.velocities.push_back(v);
    traj.lyapunov.push_back(spec.topology == Topology::OneD_OneB ? lyapunov_1d1b(links, spec)
                                                                 : total_potential(c, spec));
  };

  Stacked p = p0.p;
  Stacked k1 = rhs(p, 0.0);
  record(p0, 0.0, k1);
  for (long long k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * dt;
    const Stacked k2 = rhs(p + 0.5 * dt * k1, t0 + 0.5 * dt);
    const Stacked k3 = rhs(p + 0.5 * dt * k2, t0 + 0.5 * dt);
    const Stacked k4 = rhs(p + dt * k3, t0 + dt);
    p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t = static_cast<double>(k) * dt;
    if (!p.allFinite()) throw NonFiniteState(t);
    const Configuration c(p);
    if (min_link_distance(c, spec.topology, &pair) < collision) {
      throw CoincidentRobots(pair.a + 1, pair.b + 1, t);
    }
    k1 = rhs(p, t);
    if (k % stride == 0 || k == steps) record(c, t, k1);
  }
  traj.terminal = classify_regime(traj, spec, params);
  return traj;
}

RegimeClassification classify_regime(const Trajectory& traj, const SetupSpec& spec,
                                     const SimParams& params) {
  RegimeClassification r;
  const std::size_t n = traj.size();
  if (n == 0) return r;
  r.final_errors = traj.errors.back();
  const int robots = spec.robots();

  std::size_t window = params.classify_window > 0
                           ? static_cast<std::size_t>(params.classify_window)
                           : std::max<std::size_t>(5, n / 5);
  window = std::min(window, n);

  Vec2 mean = Vec2::Zero();
  for (std::size_t k = n - window; k < n; ++k) {
    for (int i = 0; i < robots; ++i) mean += traj.velocities[k].segment<2>(2 * i);
  }
  mean /= static_cast<double>(window * static_cast<std::size_t>(robots));
  double dispersion = 0.0;
  for (std::size_t k = n - window; k < n; ++k) {
    for (int i = 0; i < robots; ++i) {
      dispersion = std::max(dispersion, (traj.velocities[k].segment<2>(2 * i) - mean).norm());
    }
  }
  r.final_velocity = mean;
  r.velocity_dispersion = dispersion;
  const double tol = params.convergence_tol;
  if (window < 2 || !(dispersion < tol)) return r;

  const LinkState links = link_state(traj.configs.back(), spec.topology);
  const double link_tol = params.link_tol * std::max(1.0, spec.max_distance());
  auto matches = [&](const InvariantSetDescription& s) {
    double err = (links.l12.z - s.links.l12.z).norm();
    if (links.l13) err = std::max(err, (links.l13->z - s.links.l13->z).norm());
    return err <= link_tol;
  };

  if (mean.norm() <= 10.0 * tol) {
    for (const InvariantSetDescription& s : equilibrium_set(spec)) {
      if (matches(s)) {
        r.kind = s.kind == SetKind::FlippedEquilibrium ? RegimeKind::ConvergedFlipped
                                                       : RegimeKind::ConvergedCorrect;
        return r;
      }
    }
    return r;
  }
  const auto sets = moving_set(spec);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (matches(sets[i]) && (mean - sets[i].w).norm() <= 10.0 * tol) {
      r.kind = RegimeKind::ConvergedMoving;
      r.moving_index = static_cast<int>(i);
      return r;
    }
  }
  return r;
}

LyapunovSeries lyapunov_series(const Trajectory& traj, const SetupSpec& spec) {
  LyapunovSeries s;
  s.V = traj.lyapunov;
  s.diagnostic_only = spec.topology != Topology::OneD_OneB;
  const std::size_t n = s.V.size();
  s.Vdot.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double h = 0.5 * (traj.times[k + 1] - traj.times[k - 1]);
    const double outer = 0.25 * (traj.times[k + 2] - traj.times[k - 2]);
    if (std::abs(outer - h) > 1e-9 * h) continue;
    s.Vdot[k] = (s.V[k - 2] - 8.0 * s.V[k - 1] + 8.0 * s.V[k + 1] - s.V[k + 2]) / (12.0 * h);
  }
  return s;
}

}  // namespace hetform
