#include "hetform/geometry.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hetform/errors.hpp"
#include "../support/generators.hpp"

namespace hetform {
namespace {

using testing::deg;
using testing::Sampler;

TEST(LinkStateTest, AxisAligned) {
  const LinkState s = link_state(Configuration{Vec2(0, 0), Vec2(4, 0)}, Topology::OneD_OneB);
  EXPECT_EQ(s.l12.z, Vec2(4, 0));
  EXPECT_DOUBLE_EQ(s.l12.d, 4.0);
  EXPECT_EQ(s.l12.g, Vec2(1, 0));
  EXPECT_FALSE(s.l13);
}

TEST(LinkStateTest, Diagonal) {
  const LinkState s = link_state(Configuration{Vec2(0, 0), Vec2(1, 1)}, Topology::OneD_OneB);
  EXPECT_NEAR(s.l12.d, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.l12.g.x(), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(s.l12.g.y(), std::sqrt(2.0) / 2, 1e-15);
}

TEST(LinkStateTest, CoincidentRobotsThrow) {
  try {
    link_state(Configuration{Vec2(1, 1), Vec2(1, 1)}, Topology::OneD_OneB);
    FAIL() << "expected CoincidentRobots";
  } catch (const CoincidentRobots& e) {
    EXPECT_EQ(e.first(), 1);
    EXPECT_EQ(e.second(), 2);
  }
  EXPECT_THROW(link_state(Configuration{Vec2(0, 0), Vec2(1, 0), Vec2(0, 0)},
                          Topology::OneB_TwoD),
               CoincidentRobots);
}

TEST(LinkStateTest, UnitBearingsAndAntisymmetry) {
  Sampler rng(1);
  for (int k = 0; k < 1000; ++k) {
    const Configuration c = rng.configuration(Topology::OneD_TwoB);
    const LinkState s = link_state(c, Topology::OneD_TwoB);
    EXPECT_NEAR(s.l12.g.norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.l13->g.norm(), 1.0, 1e-12);
    // Swapping robots 1 and 2 reverses the link.
    Configuration swapped = c;
    swapped.set_position(0, c.position(1));
    swapped.set_position(1, c.position(0));
    const LinkState r = link_state(swapped, Topology::OneD_OneB);
    EXPECT_EQ(r.l12.z, Vec2(-s.l12.z));
    EXPECT_DOUBLE_EQ(r.l12.d, s.l12.d);
    EXPECT_NEAR((r.l12.g + s.l12.g).norm(), 0.0, 1e-15);
  }
}

TEST(IncidenceTest, MapsPositionsToLinks) {
  const Configuration c{Vec2(1, 2), Vec2(4, -1), Vec2(-3, 5)};
  const Eigen::VectorXd z = incidence_matrix(Topology::OneB_TwoD) * Eigen::VectorXd(c.p);
  EXPECT_EQ(Vec2(z.segment<2>(0)), Vec2(3, -3));
  EXPECT_EQ(Vec2(z.segment<2>(2)), Vec2(-4, 3));
  EXPECT_EQ(Vec2(z.segment<2>(4)), Vec2(-7, 6));
}

TEST(ErrorSignalTest, DistanceError) {
  EXPECT_DOUBLE_EQ(distance_error(4, 4), 0.0);
  EXPECT_NEAR(distance_error(3.8686, 4), 3.8686 * 3.8686 - 16.0, 1e-15);
  EXPECT_NEAR(distance_error(3.8686, 4), -1.034, 1e-3);
  EXPECT_DOUBLE_EQ(distance_error(5, 4), 9.0);
}

TEST(ErrorSignalTest, BearingError) {
  EXPECT_EQ(bearing_error(Vec2(0.6, 0.8), Vec2(0.6, 0.8)), Vec2(0, 0));
  EXPECT_EQ(bearing_error(Vec2(1, 0), Vec2(-1, 0)), Vec2(2, 0));
  Sampler rng(2);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 e = bearing_error(unit_from_angle(rng.angle()), unit_from_angle(rng.angle()));
    EXPECT_LE(e.norm(), 2.0 + 1e-15);
  }
}

TEST(SignedAreaTest, LiteralMatrixEvaluation) {
  // (1,0)^T [0 1; -1 0] (0,1) = (1,0) . (1,0) = 1.
  EXPECT_DOUBLE_EQ(signed_area(Vec2(1, 0), Vec2(0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(signed_area(Vec2(2, 3), Vec2(2, 3)), 0.0);
  Sampler rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 a(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const Vec2 b(rng.uniform(-5, 5), rng.uniform(-5, 5));
    EXPECT_DOUBLE_EQ(signed_area(a, b), -signed_area(b, a));
  }
}

TEST(BearingPairTest, SineUsesSameForm) {
  const BearingPair b = bearing_pair(unit_from_angle(0.0), unit_from_angle(deg(15)));
  EXPECT_NEAR(b.alpha, 0.0, 1e-15);
  EXPECT_NEAR(b.beta, deg(15), 1e-15);
  EXPECT_NEAR(b.theta, deg(15), 1e-15);
  EXPECT_NEAR(std::sin(b.theta), signed_area(unit_from_angle(0.0), unit_from_angle(deg(15))),
              1e-15);
}

TEST(SumDiffTest, QuotedShapes) {
  const auto t2 = sum_diff_decompose(0.0, deg(45));
  EXPECT_NEAR(t2.d_sum, 2 * std::cos(deg(22.5)), 1e-15);
  EXPECT_NEAR(t2.d_sum, 1.8478, 1e-4);
  EXPECT_NEAR(t2.sum_angle, deg(22.5), 1e-15);
  const auto t1 = sum_diff_decompose(0.0, deg(15));
  EXPECT_NEAR(t1.d_sum, 2 * std::cos(deg(7.5)), 1e-15);
  EXPECT_NEAR(t1.sum_angle, deg(7.5), 1e-15);
}

TEST(SumDiffTest, WideGapAddsHalfTurn) {
  const auto s = sum_diff_decompose(deg(170), deg(-170));
  EXPECT_NEAR(s.d_sum, 2 * std::cos(deg(10)), 1e-14);
  EXPECT_NEAR(std::abs(s.sum_angle), M_PI, 1e-14);
}

TEST(SumDiffTest, DegenerateBearingsThrow) {
  EXPECT_THROW(sum_diff_decompose(0.0, M_PI), DegenerateBearings);
  EXPECT_THROW(sum_diff_decompose(0.3, 0.3), DegenerateBearings);
  EXPECT_THROW(sum_diff_decompose(-M_PI / 2, M_PI / 2), DegenerateBearings);
}

TEST(SumDiffTest, ReconstructionProperty) {
  Sampler rng(4);
  int checked = 0;
  while (checked < 10000) {
    const double a = rng.angle();
    const double b = rng.angle();
    const double gap = std::abs(a - b);
    if (gap < 1e-6 || std::abs(gap - M_PI) < 1e-6) continue;
    const auto s = sum_diff_decompose(a, b);
    const Vec2 expected(std::cos(a) + std::cos(b), std::sin(a) + std::sin(b));
    EXPECT_NEAR((s.d_sum * s.g_sum - expected).norm(), 0.0, 1e-12);
    EXPECT_NEAR((s.b_sum - s.d_sum * s.g_sum).norm(), 0.0, 1e-12);
    EXPECT_GT(s.d_sum, 0.0);
    EXPECT_LT(s.d_sum, 2.0);
    ++checked;
  }
}

TEST(AngleTest, WrapIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(M_PI), M_PI);
  EXPECT_DOUBLE_EQ(wrap_angle(-M_PI), M_PI);
  EXPECT_NEAR(wrap_angle(3 * M_PI / 2), -M_PI / 2, 1e-15);
}

TEST(TopologyTest, NamesRoundTrip) {
  for (Topology t : testing::kAllTopologies) {
    EXPECT_EQ(topology_from_string(to_string(t)), t);
  }
  EXPECT_FALSE(topology_from_string("2D2B"));
}

}  // namespace
}  // namespace hetform
