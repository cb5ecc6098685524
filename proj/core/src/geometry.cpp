#include "hetform/geometry.hpp"

#include <cmath>
#include <numbers>

#include "hetform/errors.hpp"

namespace hetform {

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::OneD_OneB: return "1D1B";
    case Topology::OneD_TwoB: return "1D2B";
    case Topology::OneB_TwoD: return "1B2D";
  }
  return "?";
}

std::optional<Topology> topology_from_string(std::string_view name) {
  if (name == "1D1B") return Topology::OneD_OneB;
  if (name == "1D2B") return Topology::OneD_TwoB;
  if (name == "1B2D") return Topology::OneB_TwoD;
  return std::nullopt;
}

int robot_count(Topology t) { return t == Topology::OneD_OneB ? 2 : 3; }

Configuration::Configuration(std::initializer_list<Vec2> points) {
  p.resize(2 * static_cast<Eigen::Index>(points.size()));
  int i = 0;
  for (const Vec2& v : points) p.segment<2>(2 * i++) = v;
}

Configuration Configuration::translated(const Vec2& t) const {
  Configuration out = *this;
  for (int i = 0; i < size(); ++i) out.p.segment<2>(2 * i) += t;
  return out;
}

Link Link::from_z(const Vec2& z, int first, int second) {
  const double d = z.norm();
  if (!(d >= kCoincidenceTol)) throw CoincidentRobots(first, second);
  return Link{z, d, z / d};
}

Stacked LinkState::stacked() const {
  Stacked z(l13 ? 4 : 2);
  z.head<2>() = l12.z;
  if (l13) z.tail<2>() = l13->z;
  return z;
}

LinkState LinkState::from_stacked(const Stacked& z) {
  LinkState s;
  s.l12 = Link::from_z(z.head<2>(), 1, 2);
  if (z.size() == 4) s.l13 = Link::from_z(z.segment<2>(2), 1, 3);
  return s;
}

std::optional<Vec2> LinkState::z23() const {
  if (!l13) return std::nullopt;
  return Vec2(l13->z - l12.z);
}

LinkState link_state(const Configuration& config, Topology topology) {
  LinkState s;
  const Vec2 p1 = config.position(0);
  s.l12 = Link::from_z(config.position(1) - p1, 1, 2);
  if (robot_count(topology) == 3) {
    s.l13 = Link::from_z(config.position(2) - p1, 1, 3);
  }
  return s;
}

Eigen::MatrixXd incidence_matrix(Topology topology) {
  const Mat2 I = Mat2::Identity();
  if (robot_count(topology) == 2) {
    Eigen::MatrixXd H(2, 4);
    H << -I, I;
    return H;
  }
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(6, 6);
  H.block<2, 2>(0, 0) = -I;
  H.block<2, 2>(0, 2) = I;
  H.block<2, 2>(2, 0) = -I;
  H.block<2, 2>(2, 4) = I;
  H.block<2, 2>(4, 2) = -I;
  H.block<2, 2>(4, 4) = I;
  return H;
}

double distance_error(double d, double d_star) { return d * d - d_star * d_star; }

Vec2 bearing_error(const Vec2& g, const Vec2& g_star) { return g - g_star; }

Mat2 rotation_form() {
  Mat2 J;
  J << 0.0, 1.0, -1.0, 0.0;
  return J;
}

double signed_area(const Vec2& z12, const Vec2& z13) {
  return z12.dot(rotation_form() * z13);
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

Vec2 unit_from_angle(double a) { return Vec2(std::cos(a), std::sin(a)); }

double angle_of(const Vec2& v) { return std::atan2(v.y(), v.x()); }

BearingPair bearing_pair(const Vec2& g12, const Vec2& g13) {
  BearingPair b;
  b.alpha = angle_of(g12);
  b.beta = angle_of(g13);
  b.theta = std::atan2(signed_area(g12, g13), g12.dot(g13));
  return b;
}

SumDiffDecomposition sum_diff_decompose(double alpha, double beta) {
  alpha = wrap_angle(alpha);
  beta = wrap_angle(beta);
  const double gap = std::abs(alpha - beta);
  constexpr double pi = std::numbers::pi;
  if (gap < kAngularTol || std::abs(gap - pi) < kAngularTol ||
      std::abs(gap - 2.0 * pi) < kAngularTol) {
    throw DegenerateBearings("bearings are parallel or antiparallel");
  }
  SumDiffDecomposition s;
  if (gap < pi) {
    s.d_sum = 2.0 * std::cos(0.5 * gap);
    s.sum_angle = wrap_angle(0.5 * (alpha + beta));
  } else {
    s.d_sum = 2.0 * std::cos(pi - 0.5 * gap);
    s.sum_angle = wrap_angle(0.5 * (alpha + beta) + pi);
  }
  s.g_sum = unit_from_angle(s.sum_angle);
  s.b_sum = unit_from_angle(alpha) + unit_from_angle(beta);
  s.b_diff = unit_from_angle(alpha) - unit_from_angle(beta);
  return s;
}

}  // namespace hetform
