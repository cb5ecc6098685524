#include "hetform/analysis.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hetform/errors.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "../support/properties.hpp"

namespace hetform {
namespace {

using testing::deg;
using testing::Sampler;

SetupSpec shape_1d2b(double beta_deg) {
  return SetupSpec::from_angles(Topology::OneD_TwoB, 1.0, 4.0, {4.0, 4.0}, {0.0, deg(beta_deg)});
}

SetupSpec shape_1b2d(double alpha_deg, double beta_deg, double d = 4.0) {
  return SetupSpec::from_angles(Topology::OneB_TwoD, 1.0, 4.0, {d, d},
                                {deg(alpha_deg), deg(beta_deg)});
}

// A random spec with every edge (and every ordering) above its threshold.
SetupSpec spec_with_moving_sets(Sampler& rng, Topology t) {
  SetupSpec s = rng.spec(t, 0.15);
  const double need = existence_threshold(t, s.gain_ratio());
  for (double& d : s.d_star) d = need * rng.uniform(1.05, 2.0);
  return s;
}

TEST(ThresholdTest, ClosedForms) {
  EXPECT_NEAR(existence_threshold(Topology::OneD_OneB, 1.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(existence_threshold(Topology::OneD_TwoB, 4.0), std::sqrt(3.0) * std::cbrt(2.0), 1e-14);
  EXPECT_NEAR(existence_threshold(Topology::OneD_TwoB, 4.0), 2.1822, 1e-4);
  EXPECT_NEAR(existence_threshold(Topology::OneB_TwoD, 4.0), 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(cubic_threshold(-1.0), 0.0);
}

TEST(ThresholdTest, OrderingCoefficients) {
  const SetupSpec s = shape_1b2d(0, 45);
  const auto report = existence_thresholds(s);
  ASSERT_EQ(report.orderings.size(), 4u);
  const double ds = 2 * std::cos(deg(22.5));
  EXPECT_NEAR(report.orderings[0].s, ds - 2, 1e-14);
  EXPECT_NEAR(report.orderings[1].t, -ds - 2, 1e-14);
  EXPECT_NEAR(report.orderings[2].s, ds, 1e-14);
  EXPECT_NEAR(report.orderings[3].t, ds, 1e-14);
  for (const auto& o : report.orderings) {
    EXPECT_LE(std::max(o.threshold[0], o.threshold[1]), report.topology_threshold + 1e-12);
  }
  // Ordering III has one cubic with a negative constant term and one above.
  EXPECT_EQ(report.orderings[2].threshold[0], 0.0);
  EXPECT_GT(report.orderings[2].threshold[1], 0.0);
}

TEST(ThresholdTest, EmptinessFlipsAtThreshold) {
  for (double R : {0.5, 1.0, 4.0, 9.0}) {
    for (Topology t : {Topology::OneD_OneB, Topology::OneD_TwoB}) {
      const double h = existence_threshold(t, R);
      auto at = [&](double d) {
        return moving_set(SetupSpec::from_angles(t, 1.0, R, {d, d}, {0.3, 1.9})).size();
      };
      EXPECT_EQ(at(h - 1e-6), 0u) << to_string(t) << " R=" << R;
      EXPECT_GT(at(h + 1e-6), 0u) << to_string(t) << " R=" << R;
    }
    // Each 1B2D ordering flips at its own per-edge thresholds.
    const SetupSpec base = SetupSpec::from_angles(Topology::OneB_TwoD, 1.0, R, {1, 1}, {0.2, 1.4});
    for (const OrderingInfo& o : colinear_orderings(base)) {
      const double h = std::max(o.threshold[0], o.threshold[1]);
      if (h == 0.0) continue;
      auto count = [&](double d) {
        SetupSpec s = base;
        s.d_star = {d, d};
        int n = 0;
        for (const auto& set : moving_set(s)) n += set.ordering == o.ordering;
        return n;
      };
      EXPECT_EQ(count(h - 1e-6), 0) << to_string(o.ordering);
      EXPECT_GT(count(h + 1e-6), 0) << to_string(o.ordering);
    }
  }
}

TEST(ThresholdTest, AllOrderingsExistAboveBound) {
  Sampler rng(40);
  for (int k = 0; k < 500; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneB_TwoD);
    bool seen[4] = {false, false, false, false};
    for (const auto& set : moving_set(s)) seen[static_cast<int>(*set.ordering)] = true;
    EXPECT_TRUE(seen[0] && seen[1] && seen[2] && seen[3]);
  }
}

TEST(MovingSetTest, DoubleRootAtThreshold) {
  const double R = 1.7;
  const double h = existence_threshold(Topology::OneD_OneB, R);
  const auto sets =
      moving_set(SetupSpec::from_angles(Topology::OneD_OneB, 1.0, R, {h, h}, {0.4, 0.0}));
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].branches[0], RootBranch::Double);
  EXPECT_NEAR(sets[0].links.l12.d, std::cbrt(R), 1e-7);
}

TEST(MovingSetTest, BelowThresholdIsEmpty) {
  EXPECT_TRUE(moving_set(SetupSpec::from_angles(Topology::OneD_OneB, 1, 1, {1, 1}, {0, 0})).empty());
}

TEST(MovingSetTest, DistancesForShapeT2) {
  const auto sets = moving_set(shape_1d2b(45));
  ASSERT_EQ(sets.size(), 4u);
  bool found = false;
  for (const auto& s : sets) {
    if (s.branches[0] == RootBranch::Larger && s.branches[1] == RootBranch::Larger) {
      EXPECT_NEAR(s.links.l12.d, 3.8686, 1e-3);
      EXPECT_NEAR(s.links.l13->d, 3.8686, 1e-3);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(MovingSetTest, SubstitutionHoldsForEverySet) {
  Sampler rng(41);
  for (Topology t : testing::kAllTopologies) {
    for (int k = 0; k < 300; ++k) {
      const SetupSpec s = spec_with_moving_sets(rng, t);
      const auto sets = moving_set(s);
      ASSERT_FALSE(sets.empty());
      for (const auto& set : sets) {
        const double scale = std::max(1.0, set.w.norm());
        const LinkVelocities lv = link_rhs(set.links, s);
        EXPECT_LE(Eigen::VectorXd(lv.tracked).norm(), 1e-9 * scale) << set.label();
        const Stacked v = closed_loop_rhs(set.representative(), s);
        for (int i = 0; i < s.robots(); ++i) {
          EXPECT_LE((v.segment<2>(2 * i) - set.w).norm(), 1e-9 * scale) << set.label();
        }
        EXPECT_GT(set.w.norm(), 0.0);
      }
    }
  }
}

TEST(MovingSetTest, VelocityBoundFor1D2B) {
  Sampler rng(42);
  for (int k = 0; k < 1000; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneD_TwoB);
    for (const auto& set : moving_set(s)) {
      EXPECT_GT(set.w.norm(), 0.0);
      EXPECT_LT(set.w.norm(), 2.0 * s.K_b);
    }
  }
}

TEST(MovingSetTest, BranchMatchesSignOfH) {
  Sampler rng(43);
  for (int k = 0; k < 1000; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneD_TwoB);
    for (const auto& set : moving_set(s)) {
      const JacobianVariables v = jacobian(s, set.links).vars;
      const double h[2] = {v.m, v.n};
      for (int e = 0; e < 2; ++e) {
        const double tol = 1e-9 * std::max({1.0, v.x, v.y, v.p, v.q});
        switch (set.branches[e]) {
          case RootBranch::Larger: EXPECT_GT(h[e], tol); break;
          case RootBranch::Smaller: EXPECT_LT(h[e], -tol); break;
          default: ADD_FAILURE() << "unexpected branch " << to_string(set.branches[e]);
        }
      }
    }
  }
  // Double root: h vanishes.
  const double R = 4.0;
  const double h = existence_threshold(Topology::OneD_TwoB, R);
  const SetupSpec s = SetupSpec::from_angles(Topology::OneD_TwoB, 1, R, {h, h}, {0, deg(60)});
  const auto sets = moving_set(s);
  ASSERT_EQ(sets.size(), 1u);
  const JacobianVariables v = jacobian(s, sets[0].links).vars;
  EXPECT_NEAR(v.m, 0.0, 1e-6);
  EXPECT_NEAR(v.n, 0.0, 1e-6);
}

TEST(EquilibriumSetTest, FlippedAreaIsNegated) {
  const auto sets = equilibrium_set(shape_1b2d(0, 15));
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].kind, SetKind::CorrectEquilibrium);
  EXPECT_EQ(sets[1].kind, SetKind::FlippedEquilibrium);
  const double a0 = signed_area(sets[0].links.l12.z, sets[0].links.l13->z);
  const double a1 = signed_area(sets[1].links.l12.z, sets[1].links.l13->z);
  EXPECT_NEAR(a0, -a1, 1e-12);
  EXPECT_GT(std::abs(a0), 0.0);
  EXPECT_EQ(equilibrium_set(shape_1d2b(45)).size(), 1u);
}

TEST(JacobianTest, FiniteDifferenceProperty) {
  for (Topology t : testing::kAllTopologies) {
    const auto r = testing::check_jacobians(t, 10000, 44);
    EXPECT_TRUE(r.ok) << testing::describe(r);
  }
}

TEST(JacobianTest, SpecializedMatchesGeneralAtSets) {
  Sampler rng(45);
  for (Topology t : testing::kAllTopologies) {
    for (int k = 0; k < 200; ++k) {
      const SetupSpec s = spec_with_moving_sets(rng, t);
      auto sets = equilibrium_set(s);
      for (auto& m : moving_set(s)) sets.push_back(m);
      for (const auto& set : sets) {
        const Eigen::MatrixXd A = jacobian(s, set.links).matrix;
        const Eigen::MatrixXd B = specialized_jacobian(s, set);
        EXPECT_LE((A - B).norm(), 1e-9 * std::max(1.0, A.norm())) << set.label();
      }
    }
  }
}

TEST(JacobianTest, MatchesEntryWiseMatrices) {
  Sampler rng(46);
  for (int k = 0; k < 200; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneD_TwoB);
    const InvariantSetDescription eq = equilibrium_set(s).front();
    JacobianVariables v = jacobian(s, eq.links).vars;
    Eigen::Matrix4d oracle =
        testing::equilibrium_jacobian_1d2b_entries(v.x, v.y, v.p, v.q, s.g_star[0], s.g_star[1]);
    Eigen::MatrixXd ours = specialized_jacobian(s, eq);
    EXPECT_LE((ours - oracle).norm(), 1e-10 * std::max(1.0, oracle.norm()));

    for (const auto& m : moving_set(s)) {
      v = jacobian(s, m.links).vars;
      oracle = testing::moving_jacobian_1d2b_entries(v.x, v.y, v.p, v.q, s.g_star[0], s.g_star[1]);
      ours = specialized_jacobian(s, m);
      EXPECT_LE((ours - oracle).norm(), 1e-10 * std::max(1.0, oracle.norm())) << m.label();
    }
  }
  for (int k = 0; k < 200; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneB_TwoD);
    const SumDiffDecomposition sd =
        sum_diff_decompose(angle_of(s.g_star[0]), angle_of(s.g_star[1]));
    for (const auto& m : moving_set(s)) {
      const OrderingInfo o = colinear_orderings(s)[static_cast<int>(*m.ordering)];
      const JacobianVariables v = jacobian(s, m.links).vars;
      const Eigen::Matrix4d oracle =
          testing::colinear_jacobian_1b2d_entries(v.x, v.y, v.p, v.q, o.s, o.t, sd.g_sum);
      const Eigen::MatrixXd ours = specialized_jacobian(s, m);
      EXPECT_LE((ours - oracle).norm(), 1e-10 * std::max(1.0, oracle.norm())) << m.label();
    }
  }
}

TEST(EigenvalueTest, AnalyticMatchesNumeric) {
  Sampler rng(47);
  int compared = 0;
  for (Topology t : testing::kAllTopologies) {
    for (int k = 0; k < 1000; ++k) {
      const SetupSpec s = spec_with_moving_sets(rng, t);
      auto sets = equilibrium_set(s);
      for (auto& m : moving_set(s)) sets.push_back(m);
      for (const auto& set : sets) {
        const auto an = analytic_eigenvalues(s, set);
        if (!an) continue;
        const auto num = numeric_eigenvalues(jacobian(s, set.links).matrix);
        ASSERT_LE(testing::spectrum_distance(*an, num), 1e-8) << to_string(t) << " " << set.label();
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 3000);
}

TEST(EigenvalueTest, OneD_OneBMovingIsUnstable) {
  const SetupSpec s = SetupSpec::from_angles(Topology::OneD_OneB, 1, 1, {2, 2}, {0.5, 0});
  const auto sets = moving_set(s);
  ASSERT_EQ(sets.size(), 2u);
  for (const auto& set : sets) {
    const StabilityReport r = stability_report(s, set);
    EXPECT_EQ(r.verdict, Verdict::Unstable);
    EXPECT_TRUE(r.analytic);
    const double x = s.K_b / set.links.l12.d;
    bool has_x = false;
    for (const Complex& l : r.numeric_eigenvalues) has_x |= std::abs(l - Complex(x, 0)) < 1e-9;
    EXPECT_TRUE(has_x);
  }
}

TEST(RouthTest, KnownQuartics) {
  // (l+1)^4 = l^4 + 4l^3 + 6l^2 + 4l + 1.
  const RouthResult h = routh_hurwitz_quartic({4, 6, 4, 1});
  EXPECT_EQ(h.classification, RouthClass::Hurwitz);
  for (double c : h.column) EXPECT_GT(c, 0.0);
  // (l-1)(l+1)^3 = l^4 + 2l^3 - 2l - 1.
  const RouthResult n = routh_hurwitz_quartic({2, 0, -2, -1});
  EXPECT_EQ(n.classification, RouthClass::NotHurwitz);
  // l^2 (l+1)^2 is marginal.
  EXPECT_EQ(routh_hurwitz_quartic({2, 1, 0, 0}).classification, RouthClass::Indeterminate);
  // Zero leading division does not crash.
  EXPECT_EQ(routh_hurwitz_quartic({0, 1, 0, 1}).classification, RouthClass::Indeterminate);
}

TEST(RouthTest, AgreesWithRootSigns) {
  const auto r = testing::check_routh_vs_roots(10000, 48);
  EXPECT_TRUE(r.ok) << testing::describe(r);
}

TEST(CharPolyTest, MovingQuarticMatchesDeterminants) {
  const auto r = testing::check_moving_char_poly(1000, 49);
  EXPECT_TRUE(r.ok) << testing::describe(r);
}

TEST(CharPolyTest, DegenerateCell) {
  JacobianVariables v;
  v.x = 1.3;
  v.y = 1.3;
  v.p = 0.7;
  v.q = 0.7;
  v.m = 0;
  v.n = 0;
  v.sin2_theta = 0.4;
  const auto c = char_poly_moving_1d2b(v);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[3], 0.0);
}

TEST(MovingStabilityTest, ShapeT2IsStable) {
  const SetupSpec s = shape_1d2b(45);
  for (const auto& set : moving_set(s)) {
    if (set.branches[0] != RootBranch::Larger || set.branches[1] != RootBranch::Larger) continue;
    const StabilityReport r = moving_stability_1d2b(s, set);
    EXPECT_EQ(r.verdict, Verdict::Stable);
    ASSERT_TRUE(r.cos2_theta && r.cosine_bound);
    EXPECT_NEAR(*r.cos2_theta, 0.5, 1e-12);
    EXPECT_NEAR(*r.cosine_bound, 0.9321, 1e-3);
    for (double c : r.rh_first_column) EXPECT_GT(c, 0.0);
    EXPECT_EQ(verdict_from_eigenvalues(r.numeric_eigenvalues), Verdict::Stable);
  }
}

TEST(MovingStabilityTest, ShapeT1IsUnstable) {
  const SetupSpec s = shape_1d2b(15);
  for (const auto& set : moving_set(s)) {
    if (set.branches[0] != RootBranch::Larger || set.branches[1] != RootBranch::Larger) continue;
    const StabilityReport r = moving_stability_1d2b(s, set);
    EXPECT_EQ(r.verdict, Verdict::Unstable);
    EXPECT_NEAR(*r.cos2_theta, 0.9330, 1e-4);
    EXPECT_NEAR(*r.cosine_bound, 0.9321, 1e-3);
    EXPECT_GT(*r.cos2_theta, *r.cosine_bound);
    EXPECT_EQ(verdict_from_eigenvalues(r.numeric_eigenvalues), Verdict::Unstable);
  }
}

TEST(MovingStabilityTest, VerdictAgreesWithEigenvaluesEverywhere) {
  Sampler rng(50);
  int decided = 0;
  int cells[3][3] = {};
  for (int k = 0; k < 3000; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneD_TwoB);
    for (const auto& set : moving_set(s)) {
      const StabilityReport r = moving_stability_1d2b(s, set);
      const JacobianVariables v = jacobian(s, set.links).vars;
      cells[v.m > 0][v.n > 0]++;
      if (r.verdict == Verdict::Indeterminate) continue;
      const Verdict numeric = verdict_from_eigenvalues(r.numeric_eigenvalues);
      if (numeric == Verdict::Indeterminate) continue;
      ASSERT_EQ(r.verdict, numeric) << r.rationale;
      ++decided;
    }
  }
  EXPECT_GT(decided, 10000);
  EXPECT_GT(cells[0][0], 0);
  EXPECT_GT(cells[0][1], 0);
  EXPECT_GT(cells[1][1], 0);
}

TEST(MovingStabilityTest, PerpendicularDoubleRootIsIndeterminate) {
  const double R = 2.0;
  const double h = existence_threshold(Topology::OneD_TwoB, R);
  const SetupSpec s = SetupSpec::from_angles(Topology::OneD_TwoB, 1, R, {h, h}, {0, deg(90)});
  const auto sets = moving_set(s);
  ASSERT_EQ(sets.size(), 1u);
  const StabilityReport r = moving_stability_1d2b(s, sets[0]);
  EXPECT_EQ(r.verdict, Verdict::Indeterminate) << r.rationale;
  EXPECT_EQ(r.numeric_eigenvalues.size(), 4u);
}

TEST(MovingStabilityTest, RejectsOtherSetups) {
  const SetupSpec s = shape_1b2d(0, 15);
  EXPECT_THROW(moving_stability_1d2b(s, equilibrium_set(s).front()), InvalidSetup);
}

TEST(ColinearStabilityTest, EquilibriaStableAndOrderingsUnstable) {
  Sampler rng(51);
  for (int k = 0; k < 300; ++k) {
    const SetupSpec s = spec_with_moving_sets(rng, Topology::OneB_TwoD);
    for (const auto& r : analyze_all(s)) {
      const Verdict numeric = verdict_from_eigenvalues(r.numeric_eigenvalues);
      if (r.set.kind == SetKind::Moving) {
        EXPECT_EQ(r.verdict, Verdict::Unstable) << r.set.label();
        EXPECT_NE(r.rationale.find("<0"), std::string::npos) << r.rationale;
      } else {
        EXPECT_EQ(r.verdict, Verdict::Stable) << r.set.label();
        EXPECT_TRUE(r.analytic);
      }
      EXPECT_EQ(r.verdict, numeric) << r.set.label();
    }
  }
}

TEST(ColinearStabilityTest, OrderingThreeVelocity) {
  const SetupSpec s = shape_1b2d(-7.5, 7.5);
  const SumDiffDecomposition sd = sum_diff_decompose(deg(-7.5), deg(7.5));
  int n = 0;
  for (const auto& set : moving_set(s)) {
    if (set.ordering != Ordering::III) continue;
    EXPECT_NEAR((set.w + s.K_b * sd.b_sum).norm(), 0.0, 1e-9) << set.label();
    ++n;
  }
  EXPECT_GT(n, 0);
}

TEST(StabilityReportTest, EmptySetIsIndeterminate) {
  InvariantSetDescription empty;
  const StabilityReport r = stability_report(shape_1d2b(45), empty);
  EXPECT_EQ(r.verdict, Verdict::Indeterminate);
  EXPECT_EQ(r.rationale, "empty set");
}

}  // namespace
}  // namespace hetform
