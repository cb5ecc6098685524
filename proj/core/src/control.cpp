#include "hetform/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hetform/errors.hpp"

namespace hetform {
namespace {

struct Neighbor {
  int robot;
  int edge;
};

// Complete bipartite graph between the distance and bearing robots.
std::vector<Neighbor> neighbors(Topology t, int robot) {
  if (robot == 0) {
    if (t == Topology::OneD_OneB) return {{1, 0}};
    return {{1, 0}, {2, 1}};
  }
  return {{0, robot - 1}};
}

// Desired bearing from `robot` towards its neighbor on `edge`.
Vec2 desired_bearing(const SetupSpec& spec, int robot, int edge) {
  return robot == 0 ? spec.g_star[edge] : Vec2(-spec.g_star[edge]);
}

Vec2 relative(const Configuration& config, int from, int to) {
  return config.position(to) - config.position(from);
}

}  // namespace

SetupSpec SetupSpec::from_angles(Topology topology, double K_d, double K_b,
                                 std::array<double, 2> distances,
                                 std::array<double, 2> angles) {
  SetupSpec s;
  s.topology = topology;
  s.K_d = K_d;
  s.K_b = K_b;
  s.d_star = distances;
  s.g_star = {unit_from_angle(angles[0]), unit_from_angle(angles[1])};
  return s;
}

double SetupSpec::max_distance() const {
  return edges() == 1 ? d_star[0] : std::max(d_star[0], d_star[1]);
}

double SetupSpec::min_distance() const {
  return edges() == 1 ? d_star[0] : std::min(d_star[0], d_star[1]);
}

void SetupSpec::validate() const {
  auto fail = [](const std::string& what) { throw InvalidSetup(what); };
  if (!(K_d > 0.0) || !std::isfinite(K_d)) fail("K_d must be positive");
  if (!(K_b > 0.0) || !std::isfinite(K_b)) fail("K_b must be positive");
  for (int e = 0; e < edges(); ++e) {
    if (!(d_star[e] > 0.0) || !std::isfinite(d_star[e])) {
      fail("desired distances must be positive");
    }
    if (!g_star[e].allFinite() || std::abs(g_star[e].norm() - 1.0) > 1e-12) {
      fail("desired bearings must be unit vectors");
    }
  }
  if (edges() == 2) {
    const double s = signed_area(g_star[0], g_star[1]);
    if (std::abs(std::asin(std::clamp(s, -1.0, 1.0))) < kAngularTol) {
      fail("desired bearings g12* and g13* must not be parallel");
    }
  }
}

Role role(Topology topology, int robot) {
  const bool first = robot == 0;
  switch (topology) {
    case Topology::OneD_OneB:
    case Topology::OneD_TwoB:
      return first ? Role::Distance : Role::Bearing;
    case Topology::OneB_TwoD:
      return first ? Role::Bearing : Role::Distance;
  }
  return Role::Distance;
}

Vec2 distance_control(int robot, const Configuration& config, const SetupSpec& spec) {
  Vec2 u = Vec2::Zero();
  for (const Neighbor& n : neighbors(spec.topology, robot)) {
    const Vec2 z = relative(config, robot, n.robot);
    u += distance_error(z.norm(), spec.d_star[n.edge]) * z;
  }
  return spec.K_d * u;
}

Vec2 bearing_control(int robot, const Configuration& config, const SetupSpec& spec) {
  Vec2 u = Vec2::Zero();
  for (const Neighbor& n : neighbors(spec.topology, robot)) {
    const Link l = Link::from_z(relative(config, robot, n.robot),
                                std::min(robot, n.robot) + 1, std::max(robot, n.robot) + 1);
    u += bearing_error(l.g, desired_bearing(spec, robot, n.edge));
  }
  return spec.K_b * u;
}

Stacked closed_loop_rhs(const Configuration& config, const SetupSpec& spec) {
  const int n = spec.robots();
  Stacked v(2 * n);
  for (int i = 0; i < n; ++i) {
    v.segment<2>(2 * i) = role(spec.topology, i) == Role::Distance
                              ? distance_control(i, config, spec)
                              : bearing_control(i, config, spec);
  }
  return v;
}

LinkVelocities link_rhs(const LinkState& links, const SetupSpec& spec) {
  const double Kd = spec.K_d;
  const double Kb = spec.K_b;
  const Link& a = links.l12;
  const double e12d = distance_error(a.d, spec.d_star[0]);
  const Vec2 e12b = bearing_error(a.g, spec.g_star[0]);
  LinkVelocities out;

  if (spec.topology == Topology::OneD_OneB) {
    out.tracked = -(Kb * e12b + Kd * e12d * a.z);
    return out;
  }
  if (!links.l13) throw InvalidSetup("three-robot setup needs link z13");
  const Link& b = *links.l13;
  const double e13d = distance_error(b.d, spec.d_star[1]);
  const Vec2 e13b = bearing_error(b.g, spec.g_star[1]);
  out.tracked.resize(4);

  if (spec.topology == Topology::OneD_TwoB) {
    const Vec2 drift = Kd * (e12d * a.z + e13d * b.z);
    out.tracked.head<2>() = -(Kb * e12b + drift);
    out.tracked.tail<2>() = -(Kb * e13b + drift);
    out.z23 = Vec2(-Kb * (e13b - e12b));
  } else {
    const Vec2 drift = Kb * (e12b + e13b);
    out.tracked.head<2>() = -(Kd * e12d * a.z + drift);
    out.tracked.tail<2>() = -(Kd * e13d * b.z + drift);
    out.z23 = Vec2(-Kd * (e13d * b.z - e12d * a.z));
  }
  return out;
}

ErrorVector error_vector(const LinkState& links, const SetupSpec& spec) {
  ErrorVector e;
  if (spec.topology == Topology::OneD_OneB) {
    e.resize(3);
    e(0) = distance_error(links.l12.d, spec.d_star[0]);
    e.segment<2>(1) = bearing_error(links.l12.g, spec.g_star[0]);
    return e;
  }
  if (!links.l13) throw InvalidSetup("three-robot setup needs link z13");
  e.resize(6);
  e(0) = distance_error(links.l12.d, spec.d_star[0]);
  e(1) = distance_error(links.l13->d, spec.d_star[1]);
  e.segment<2>(2) = bearing_error(links.l12.g, spec.g_star[0]);
  e.segment<2>(4) = bearing_error(links.l13->g, spec.g_star[1]);
  return e;
}

ErrorVector error_vector(const Configuration& config, const SetupSpec& spec) {
  return error_vector(link_state(config, spec.topology), spec);
}

double robot_potential(int robot, const Configuration& config, const SetupSpec& spec) {
  double V = 0.0;
  const bool distance = role(spec.topology, robot) == Role::Distance;
  for (const Neighbor& n : neighbors(spec.topology, robot)) {
    const Vec2 z = relative(config, robot, n.robot);
    const double d = z.norm();
    if (distance) {
      const double e = distance_error(d, spec.d_star[n.edge]);
      V += 0.25 * spec.K_d * e * e;
    } else {
      if (d < kCoincidenceTol) {
        throw CoincidentRobots(std::min(robot, n.robot) + 1, std::max(robot, n.robot) + 1);
      }
      const Vec2 eb = bearing_error(z / d, desired_bearing(spec, robot, n.edge));
      V += 0.5 * spec.K_b * d * eb.squaredNorm();
    }
  }
  return V;
}

double total_potential(const Configuration& config, const SetupSpec& spec) {
  double V = 0.0;
  for (int i = 0; i < spec.robots(); ++i) V += robot_potential(i, config, spec);
  return V;
}

double lyapunov_1d1b(const LinkState& links, const SetupSpec& spec) {
  if (spec.topology != Topology::OneD_OneB) {
    throw InvalidSetup("lyapunov_1d1b is only defined for the 1D1B setup");
  }
  const double e = distance_error(links.l12.d, spec.d_star[0]);
  const Vec2 e21b = bearing_error(-links.l12.g, -spec.g_star[0]);
  return 0.25 * spec.K_d * e * e + 0.5 * spec.K_b * links.l12.d * e21b.squaredNorm();
}

}  // namespace hetform
