#pragma once

#include <array>

#include "hetform/geometry.hpp"

namespace hetform {

enum class Role { Distance, Bearing };

/// Topology, gains and per-edge constraints. Edge 0 is (1,2), edge 1 is (1,3);
/// edge 1 is ignored for two robots. Bearings are stored as seen from robot 1.
struct SetupSpec {
  Topology topology = Topology::OneD_OneB;
  double K_d = 1.0;
  double K_b = 1.0;
  std::array<double, 2> d_star{1.0, 1.0};
  std::array<Vec2, 2> g_star{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

  /// Builds a spec from bearing angles in radians.
  static SetupSpec from_angles(Topology topology, double K_d, double K_b,
                               std::array<double, 2> distances,
                               std::array<double, 2> angles);

  double gain_ratio() const { return K_b / K_d; }
  int robots() const { return robot_count(topology); }
  int edges() const { return robots() - 1; }
  double max_distance() const;
  double min_distance() const;

  /// Throws InvalidSetup on non-positive gains/distances, non-unit bearings or
  /// g12* = ±g13* for three robots.
  void validate() const;
};

/// Stacked tracked errors. 1D1B: [e12d, e12b]. Three robots:
/// [e12d, e13d, e12b, e13b], with e1jb = g1j - g1j*.
using ErrorVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 6, 1>;

/// Robot indices are 0-based here (0 is R1).
Role role(Topology topology, int robot);

Vec2 distance_control(int robot, const Configuration& config, const SetupSpec& spec);
Vec2 bearing_control(int robot, const Configuration& config, const SetupSpec& spec);

/// Stacked velocities of every robot.
Stacked closed_loop_rhs(const Configuration& config, const SetupSpec& spec);

struct LinkVelocities {
  Stacked tracked;  // [z12dot; z13dot]
  std::optional<Vec2> z23;
};

/// Link dynamics written directly in link coordinates.
LinkVelocities link_rhs(const LinkState& links, const SetupSpec& spec);

ErrorVector error_vector(const LinkState& links, const SetupSpec& spec);
ErrorVector error_vector(const Configuration& config, const SetupSpec& spec);

/// Sum of the potentials robot `robot` descends: K_d e^2/4 per distance edge,
/// K_b d |e_b|^2 / 2 per bearing edge.
double robot_potential(int robot, const Configuration& config, const SetupSpec& spec);
double total_potential(const Configuration& config, const SetupSpec& spec);

/// V = K_d e12d^2/4 + K_b d21 |e21b|^2/2. Only defined for 1D1B.
double lyapunov_1d1b(const LinkState& links, const SetupSpec& spec);

}  // namespace hetform
