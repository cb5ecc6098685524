#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace hetform {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
/// Stacked planar vectors, at most three robots. Fixed capacity keeps the
/// integrator allocation-free.
using Stacked = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 6, 1>;

enum class Topology { OneD_OneB, OneD_TwoB, OneB_TwoD };

/// "1D1B", "1D2B", "1B2D".
std::string_view to_string(Topology t);
std::optional<Topology> topology_from_string(std::string_view name);
int robot_count(Topology t);

/// Stacked positions p = [p1; p2; (p3)].
struct Configuration {
  Stacked p;

  Configuration() = default;
  explicit Configuration(const Stacked& stacked) : p(stacked) {}
  Configuration(std::initializer_list<Vec2> points);

  int size() const { return static_cast<int>(p.size() / 2); }
  Vec2 position(int robot) const { return p.segment<2>(2 * robot); }
  void set_position(int robot, const Vec2& v) { p.segment<2>(2 * robot) = v; }
  bool all_finite() const { return p.allFinite(); }
  Configuration translated(const Vec2& t) const;
};

/// z = p_j - p_i together with its length and direction.
struct Link {
  Vec2 z = Vec2::Zero();
  double d = 0.0;
  Vec2 g = Vec2::Zero();

  /// Throws CoincidentRobots(first, second) when |z| < 1e-9.
  static Link from_z(const Vec2& z, int first, int second);
  Link reversed() const { return Link{-z, d, -g}; }
};

/// Tracked links z12 and, for three robots, z13. The invisible link
/// z23 = z13 - z12 is derived on demand.
struct LinkState {
  Link l12;
  std::optional<Link> l13;

  int robots() const { return l13 ? 3 : 2; }
  /// [z12; z13] (or z12 alone).
  Stacked stacked() const;
  static LinkState from_stacked(const Stacked& z);
  std::optional<Vec2> z23() const;
};

constexpr double kCoincidenceTol = 1e-9;
constexpr double kAngularTol = 1e-9;

LinkState link_state(const Configuration& config, Topology topology);

/// Rows map p to [z12; z13; z23] (z12 alone for two robots). The first
/// 2(n-1) rows are the tracked links.
Eigen::MatrixXd incidence_matrix(Topology topology);

double distance_error(double d, double d_star);
Vec2 bearing_error(const Vec2& g, const Vec2& g_star);

/// J = [0 1; -1 0].
Mat2 rotation_form();

/// a^T J b. With this form (1,0),(0,1) evaluates to +1.
double signed_area(const Vec2& z12, const Vec2& z13);

/// Wraps into (-pi, pi].
double wrap_angle(double a);
Vec2 unit_from_angle(double a);
double angle_of(const Vec2& v);

struct BearingPair {
  double alpha = 0.0;
  double beta = 0.0;
  /// Enclosed angle with sin(theta) = g12^T J g13.
  double theta = 0.0;
};

BearingPair bearing_pair(const Vec2& g12, const Vec2& g13);

struct SumDiffDecomposition {
  double d_sum = 0.0;
  double sum_angle = 0.0;
  Vec2 g_sum = Vec2::Zero();
  Vec2 b_sum = Vec2::Zero();
  Vec2 b_diff = Vec2::Zero();
};

/// b_sum = g(alpha) + g(beta) = d_sum g_sum. Throws DegenerateBearings when
/// the two directions are parallel or antiparallel within kAngularTol.
SumDiffDecomposition sum_diff_decompose(double alpha, double beta);

}  // namespace hetform
