#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetform/control.hpp"
#include "hetform/polynomial.hpp"

namespace hetform {

enum class SetKind { CorrectEquilibrium, FlippedEquilibrium, Moving, Empty };
/// Colinear arrangements of the 1B2D setup along g*_sum:
/// I: g12 = g13 = g_sum, II: g12 = g13 = -g_sum,
/// III: g12 = -g13 = g_sum, IV: g12 = -g13 = -g_sum.
enum class Ordering { I, II, III, IV };
/// Which positive root of an edge cubic a moving distance came from.
enum class RootBranch { Larger, Smaller, Double, Single };
enum class Verdict { Stable, Unstable, Indeterminate };

std::string_view to_string(SetKind k);
std::string_view to_string(Ordering o);
std::string_view to_string(RootBranch b);
std::string_view to_string(Verdict v);

struct InvariantSetDescription {
  SetKind kind = SetKind::Empty;
  LinkState links;
  /// Common velocity of the team, zero for equilibria.
  Vec2 w = Vec2::Zero();
  ErrorVector errors;
  std::optional<Ordering> ordering;
  /// One entry per tracked edge for moving sets.
  std::vector<RootBranch> branches;

  /// Robot 1 at the origin.
  Configuration representative() const;
  std::string label() const;
};

/// sqrt(3) (D/2)^(1/3) for D > 0: the smallest d* for which
/// d^3 - d*^2 d + D = 0 has a positive root. Zero when D <= 0.
double cubic_threshold(double D);

/// 1D1B: sqrt(3) R^(1/3). 1D2B: sqrt(3) (R/2)^(1/3).
/// 1B2D: sqrt(3) (2R)^(1/3), the bound above which every ordering exists for
/// any pair of bearings.
double existence_threshold(Topology topology, double R_bd);

struct OrderingInfo {
  Ordering ordering = Ordering::I;
  double s = 0.0;
  double t = 0.0;
  /// Constant term of each edge cubic (-s R, -t R).
  std::array<double, 2> D{};
  /// Per-edge d* threshold; zero when the cubic always has a positive root.
  std::array<double, 2> threshold{};
  Vec2 g12 = Vec2::Zero();
  Vec2 g13 = Vec2::Zero();
};

std::vector<OrderingInfo> colinear_orderings(const SetupSpec& spec);

struct ThresholdReport {
  double R_bd = 0.0;
  /// Topology threshold from existence_threshold().
  double topology_threshold = 0.0;
  /// Per-edge constant terms and thresholds for 1D1B / 1D2B.
  std::vector<double> edge_thresholds;
  /// 1B2D only.
  std::vector<OrderingInfo> orderings;
};

ThresholdReport existence_thresholds(const SetupSpec& spec);

std::vector<InvariantSetDescription> equilibrium_set(const SetupSpec& spec);
/// Every feasible moving configuration; empty below threshold.
std::vector<InvariantSetDescription> moving_set(const SetupSpec& spec);

/// x = K_b/d12, y = 2 K_d d12^2, p = K_b/d13, q = 2 K_d d13^2, m = y - x,
/// n = q - p, and sin^2 of the angle between g12 and g13.
struct JacobianVariables {
  double x = 0.0, y = 0.0, p = 0.0, q = 0.0, m = 0.0, n = 0.0;
  double sin2_theta = 0.0;
};

struct JacobianBundle {
  Eigen::MatrixXd matrix;
  /// [1, c1, ..., cn].
  Eigen::VectorXd char_poly;
  std::optional<std::vector<Complex>> analytic_eigs;
  JacobianVariables vars;
};

/// Jacobian of link_rhs with respect to the tracked links.
JacobianBundle jacobian(const SetupSpec& spec, const LinkState& links);

/// The Jacobian at an invariant set assembled from the set's characterization
/// (distance errors from the edge cubics rather than from the link lengths).
Eigen::MatrixXd specialized_jacobian(const SetupSpec& spec, const InvariantSetDescription& set);

/// Closed-form spectrum at a set, when one is known.
std::optional<std::vector<Complex>> analytic_eigenvalues(const SetupSpec& spec,
                                                         const InvariantSetDescription& set);

/// c1..c4 of the 1D2B moving-set characteristic quartic.
std::array<double, 4> char_poly_moving_1d2b(const JacobianVariables& v);

enum class RouthClass { Hurwitz, NotHurwitz, Indeterminate };

struct RouthResult {
  std::array<double, 5> column{};
  RouthClass classification = RouthClass::Indeterminate;
};

/// First column of the Routh table of lambda^4 + c1 lambda^3 + ... + c4.
RouthResult routh_hurwitz_quartic(const std::array<double, 4>& c);

/// Right-hand side of the 1D2B moving-set cosine condition (m, n > 0):
/// mn((mq - ny)^2 + mn(m+n)(x+p)) / ((m^2 q + n^2 y)(mqx + nyp)).
double moving_cosine_bound(const JacobianVariables& v);

struct StabilityReport {
  InvariantSetDescription set;
  /// Closed form when available, else numeric.
  std::vector<Complex> eigenvalues;
  bool analytic = false;
  std::vector<Complex> numeric_eigenvalues;
  std::vector<double> rh_first_column;
  Verdict verdict = Verdict::Indeterminate;
  std::string rationale;
  std::optional<double> cos2_theta;
  std::optional<double> cosine_bound;
};

/// Eigenvalue-sign verdict with margin 1e-9 max(1, |lambda|max).
Verdict verdict_from_eigenvalues(const std::vector<Complex>& eigs);

StabilityReport moving_stability_1d2b(const SetupSpec& spec, const InvariantSetDescription& set);
StabilityReport stability_report(const SetupSpec& spec, const InvariantSetDescription& set);
/// Equilibria followed by moving sets.
std::vector<StabilityReport> analyze_all(const SetupSpec& spec);

}  // namespace hetform
