#include "hetform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hetform/cubic.hpp"
#include "hetform/errors.hpp"

namespace hetform {
namespace {

const Mat2 I2 = Mat2::Identity();

Mat2 outer(const Vec2& g) { return g * g.transpose(); }

// Blocks of the link Jacobian expressed with ke = K_d e, x = K_b/d and
// y = 2 K_d d^2, so that K_d A_d = ke I + y gg^T and K_b A_b = x (I - gg^T).
struct EdgeTerms {
  double ke;
  double x;
  double y;
  Vec2 g;
  Mat2 distance() const { return ke * I2 + y * outer(g); }
  Mat2 bearing() const { return x * (I2 - outer(g)); }
};

Eigen::MatrixXd assemble(Topology topology, const EdgeTerms& a, const EdgeTerms* b) {
  if (topology == Topology::OneD_OneB) {
    return -(a.bearing() + a.distance());
  }
  Eigen::MatrixXd A(4, 4);
  if (topology == Topology::OneD_TwoB) {
    A.block<2, 2>(0, 0) = a.bearing() + a.distance();
    A.block<2, 2>(0, 2) = b->distance();
    A.block<2, 2>(2, 0) = a.distance();
    A.block<2, 2>(2, 2) = b->bearing() + b->distance();
  } else {
    A.block<2, 2>(0, 0) = a.bearing() + a.distance();
    A.block<2, 2>(0, 2) = b->bearing();
    A.block<2, 2>(2, 0) = a.bearing();
    A.block<2, 2>(2, 2) = b->bearing() + b->distance();
  }
  return -A;
}

struct EdgeRoot {
  double d;
  RootBranch branch;
};

// Positive roots of d^3 - dstar^2 d + D = 0.
std::vector<EdgeRoot> edge_roots(double dstar, double D) {
  const CubicSolution sol = solve_reduced_cubic({-dstar * dstar, D});
  std::vector<EdgeRoot> out;
  if (D > 0.0) {
    if (!sol.positive_roots) return out;
    if (sol.kind == DiscriminantClass::Repeated) {
      out.push_back({sol.positive_roots->larger, RootBranch::Double});
    } else {
      out.push_back({sol.positive_roots->larger, RootBranch::Larger});
      out.push_back({sol.positive_roots->smaller, RootBranch::Smaller});
    }
  } else if (sol.roots.back() > 0.0) {
    out.push_back({sol.roots.back(), RootBranch::Single});
  }
  return out;
}

Link link_from(double d, const Vec2& g, int second) {
  return Link::from_z(d * g, 1, second);
}

InvariantSetDescription make_set(const SetupSpec& spec, SetKind kind, const LinkState& links) {
  InvariantSetDescription s;
  s.kind = kind;
  s.links = links;
  s.errors = error_vector(links, spec);
  return s;
}

// Common robot velocity obtained by substitution into the closed loop.
Vec2 substituted_velocity(const SetupSpec& spec, const InvariantSetDescription& s) {
  const Stacked v = closed_loop_rhs(s.representative(), spec);
  Vec2 w = Vec2::Zero();
  const int n = spec.robots();
  for (int i = 0; i < n; ++i) w += v.segment<2>(2 * i);
  return w / static_cast<double>(n);
}

int sign_of(double v, double scale) {
  const double tol = 1e-9 * std::max(1.0, scale);
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

std::string sign_text(int s) { return s > 0 ? ">0" : (s < 0 ? "<0" : "=0"); }

std::vector<Complex> append(std::vector<Complex> v, const std::array<Complex, 2>& q) {
  v.push_back(q[0]);
  v.push_back(q[1]);
  sort_spectrum(v);
  return v;
}

OrderingInfo ordering_info(const SetupSpec& spec, Ordering o) {
  return colinear_orderings(spec)[static_cast<std::size_t>(o)];
}

}  // namespace

std::string_view to_string(SetKind k) {
  switch (k) {
    case SetKind::CorrectEquilibrium: return "CorrectEquilibrium";
    case SetKind::FlippedEquilibrium: return "FlippedEquilibrium";
    case SetKind::Moving: return "Moving";
    case SetKind::Empty: return "Empty";
  }
  return "?";
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::I: return "I";
    case Ordering::II: return "II";
    case Ordering::III: return "III";
    case Ordering::IV: return "IV";
  }
  return "?";
}

std::string_view to_string(RootBranch b) {
  switch (b) {
    case RootBranch::Larger: return "larger";
    case RootBranch::Smaller: return "smaller";
    case RootBranch::Double: return "double";
    case RootBranch::Single: return "single";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Configuration InvariantSetDescription::representative() const {
  Configuration c;
  c.p = Stacked::Zero(2 * links.robots());
  c.set_position(1, links.l12.z);
  if (links.l13) c.set_position(2, links.l13->z);
  return c;
}

std::string InvariantSetDescription::label() const {
  std::ostringstream os;
  switch (kind) {
    case SetKind::CorrectEquilibrium: os << "correct"; break;
    case SetKind::FlippedEquilibrium: os << "flipped"; break;
    case SetKind::Empty: os << "empty"; break;
    case SetKind::Moving:
      os << "moving";
      if (ordering) os << " ordering " << to_string(*ordering);
      os << " [";
      for (std::size_t i = 0; i < branches.size(); ++i) {
        os << (i ? "," : "") << to_string(branches[i]);
      }
      os << "]";
      break;
  }
  return os.str();
}

double cubic_threshold(double D) {
  if (!(D > 0.0)) return 0.0;
  return std::sqrt(3.0) * std::cbrt(0.5 * D);
}

double existence_threshold(Topology topology, double R_bd) {
  switch (topology) {
    case Topology::OneD_OneB: return cubic_threshold(2.0 * R_bd);
    case Topology::OneD_TwoB: return cubic_threshold(R_bd);
    case Topology::OneB_TwoD: return cubic_threshold(4.0 * R_bd);
  }
  return 0.0;
}

std::vector<OrderingInfo> colinear_orderings(const SetupSpec& spec) {
  const SumDiffDecomposition sd =
      sum_diff_decompose(angle_of(spec.g_star[0]), angle_of(spec.g_star[1]));
  const double ds = sd.d_sum;
  const double R = spec.gain_ratio();
  const Vec2 g = sd.g_sum;
  std::vector<OrderingInfo> out(4);
  out[0] = {Ordering::I, -2.0 + ds, -2.0 + ds, {}, {}, g, g};
  out[1] = {Ordering::II, -2.0 - ds, -2.0 - ds, {}, {}, -g, -g};
  out[2] = {Ordering::III, ds, -ds, {}, {}, g, -g};
  out[3] = {Ordering::IV, -ds, ds, {}, {}, -g, g};
  for (OrderingInfo& o : out) {
    o.D = {-o.s * R, -o.t * R};
    o.threshold = {cubic_threshold(o.D[0]), cubic_threshold(o.D[1])};
  }
  return out;
}

ThresholdReport existence_thresholds(const SetupSpec& spec) {
  ThresholdReport r;
  r.R_bd = spec.gain_ratio();
  r.topology_threshold = existence_threshold(spec.topology, r.R_bd);
  switch (spec.topology) {
    case Topology::OneD_OneB:
      r.edge_thresholds = {r.topology_threshold};
      break;
    case Topology::OneD_TwoB:
      r.edge_thresholds = {r.topology_threshold, r.topology_threshold};
      break;
    case Topology::OneB_TwoD:
      r.orderings = colinear_orderings(spec);
      break;
  }
  return r;
}

std::vector<InvariantSetDescription> equilibrium_set(const SetupSpec& spec) {
  std::vector<InvariantSetDescription> out;
  LinkState correct;
  correct.l12 = link_from(spec.d_star[0], spec.g_star[0], 2);
  if (spec.edges() == 2) correct.l13 = link_from(spec.d_star[1], spec.g_star[1], 3);
  out.push_back(make_set(spec, SetKind::CorrectEquilibrium, correct));

  if (spec.topology == Topology::OneB_TwoD) {
    LinkState flipped;
    flipped.l12 = link_from(spec.d_star[0], spec.g_star[1], 2);
    flipped.l13 = link_from(spec.d_star[1], spec.g_star[0], 3);
    out.push_back(make_set(spec, SetKind::FlippedEquilibrium, flipped));
  }
  return out;
}

std::vector<InvariantSetDescription> moving_set(const SetupSpec& spec) {
  const double R = spec.gain_ratio();
  std::vector<InvariantSetDescription> out;

  if (spec.topology == Topology::OneD_OneB) {
    for (const EdgeRoot& r : edge_roots(spec.d_star[0], 2.0 * R)) {
      LinkState l;
      l.l12 = link_from(r.d, -spec.g_star[0], 2);
      InvariantSetDescription s = make_set(spec, SetKind::Moving, l);
      s.branches = {r.branch};
      s.w = 2.0 * spec.K_b * spec.g_star[0];
      out.push_back(std::move(s));
    }
    return out;
  }

  if (spec.topology == Topology::OneD_TwoB) {
    const Vec2 w = spec.K_b * (spec.g_star[0] + spec.g_star[1]);
    for (const EdgeRoot& a : edge_roots(spec.d_star[0], R)) {
      for (const EdgeRoot& b : edge_roots(spec.d_star[1], R)) {
        LinkState l;
        l.l12 = link_from(a.d, -spec.g_star[1], 2);
        l.l13 = link_from(b.d, -spec.g_star[0], 3);
        InvariantSetDescription s = make_set(spec, SetKind::Moving, l);
        s.branches = {a.branch, b.branch};
        s.w = w;
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  for (const OrderingInfo& o : colinear_orderings(spec)) {
    for (const EdgeRoot& a : edge_roots(spec.d_star[0], o.D[0])) {
      for (const EdgeRoot& b : edge_roots(spec.d_star[1], o.D[1])) {
        LinkState l;
        l.l12 = link_from(a.d, o.g12, 2);
        l.l13 = link_from(b.d, o.g13, 3);
        InvariantSetDescription s = make_set(spec, SetKind::Moving, l);
        s.ordering = o.ordering;
        s.branches = {a.branch, b.branch};
        s.w = substituted_velocity(spec, s);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

JacobianBundle jacobian(const SetupSpec& spec, const LinkState& links) {
  const double Kd = spec.K_d;
  const double Kb = spec.K_b;
  auto terms = [&](const Link& l, double dstar) {
    return EdgeTerms{Kd * distance_error(l.d, dstar), Kb / l.d, 2.0 * Kd * l.d * l.d, l.g};
  };
  JacobianBundle J;
  const EdgeTerms a = terms(links.l12, spec.d_star[0]);
  J.vars.x = a.x;
  J.vars.y = a.y;
  J.vars.m = a.y - a.x;
  if (spec.topology == Topology::OneD_OneB) {
    J.matrix = assemble(spec.topology, a, nullptr);
  } else {
    if (!links.l13) throw InvalidSetup("three-robot setup needs link z13");
    const EdgeTerms b = terms(*links.l13, spec.d_star[1]);
    J.vars.p = b.x;
    J.vars.q = b.y;
    J.vars.n = b.y - b.x;
    const double s = signed_area(a.g, b.g);
    J.vars.sin2_theta = s * s;
    J.matrix = assemble(spec.topology, a, &b);
  }
  J.char_poly = characteristic_polynomial(J.matrix);
  return J;
}

Eigen::MatrixXd specialized_jacobian(const SetupSpec& spec, const InvariantSetDescription& set) {
  const double Kd = spec.K_d;
  const double Kb = spec.K_b;
  auto base = [&](const Link& l) {
    return EdgeTerms{0.0, Kb / l.d, 2.0 * Kd * l.d * l.d, l.g};
  };
  EdgeTerms a = base(set.links.l12);
  EdgeTerms b = set.links.l13 ? base(*set.links.l13) : a;

  if (set.kind == SetKind::Moving) {
    switch (spec.topology) {
      case Topology::OneD_OneB:
        a.ke = -2.0 * a.x;
        break;
      case Topology::OneD_TwoB:
        a.ke = -a.x;
        b.ke = -b.x;
        break;
      case Topology::OneB_TwoD: {
        const OrderingInfo o = ordering_info(spec, set.ordering.value());
        a.ke = o.s * a.x;
        b.ke = o.t * b.x;
        break;
      }
    }
  }
  return assemble(spec.topology, a, spec.edges() == 2 ? &b : nullptr);
}

std::optional<std::vector<Complex>> analytic_eigenvalues(const SetupSpec& spec,
                                                         const InvariantSetDescription& set) {
  if (set.kind == SetKind::Empty) return std::nullopt;
  const JacobianVariables v = jacobian(spec, set.links).vars;
  const bool moving = set.kind == SetKind::Moving;
  std::vector<Complex> out;
  switch (spec.topology) {
    case Topology::OneD_OneB:
      out = moving ? std::vector<Complex>{v.x, 2.0 * v.x - v.y}
                   : std::vector<Complex>{-v.x, -v.y};
      sort_spectrum(out);
      return out;
    case Topology::OneD_TwoB:
      if (moving) return std::nullopt;
      return append({-v.x, -v.p}, quadratic_roots(v.y + v.q, v.y * v.q * v.sin2_theta));
    case Topology::OneB_TwoD: {
      if (!moving) {
        return append({-v.q, -v.y}, quadratic_roots(v.p + v.x, v.p * v.x * v.sin2_theta));
      }
      const OrderingInfo o = ordering_info(spec, set.ordering.value());
      const double BB = v.p * (o.t + 1.0) + v.x * (o.s + 1.0);
      const double CC = v.p * v.x * ((o.t + 1.0) * (o.s + 1.0) - 1.0);
      return append({-(v.p * o.t + v.q), -(v.x * o.s + v.y)}, quadratic_roots(BB, CC));
    }
  }
  return std::nullopt;
}

std::array<double, 4> char_poly_moving_1d2b(const JacobianVariables& v) {
  const double s2 = v.sin2_theta;
  return {v.m + v.n,
          v.q * v.y * s2 - v.p * v.x,
          v.x * v.m * (v.q * s2 - v.p) + v.p * v.n * (v.y * s2 - v.x),
          v.p * v.x * v.m * v.n * s2};
}

RouthResult routh_hurwitz_quartic(const std::array<double, 4>& c) {
  RouthResult r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  const double eps = 1e-9 * scale;

  r.column = {1.0, c[0], nan, nan, c[3]};
  const double b1 = c[0] * c[1] - c[2];
  if (std::abs(c[0]) > eps) {
    r.column[2] = b1 / c[0];
    if (std::abs(r.column[2]) > eps) {
      r.column[3] = (b1 * c[2] - c[0] * c[0] * c[3]) / b1;
    }
  }

  // A negative coefficient rules out Re(lambda) <= 0 for every root.
  if (std::any_of(c.begin(), c.end(), [&](double v) { return v < -eps; })) {
    r.classification = RouthClass::NotHurwitz;
    return r;
  }
  bool marginal = false;
  bool negative = false;
  for (double v : r.column) {
    if (std::isnan(v) || std::abs(v) <= eps) marginal = true;
    else if (v < 0.0) negative = true;
  }
  if (marginal) r.classification = RouthClass::Indeterminate;
  else if (negative) r.classification = RouthClass::NotHurwitz;
  else r.classification = RouthClass::Hurwitz;
  return r;
}

double moving_cosine_bound(const JacobianVariables& v) {
  const double m = v.m, n = v.n, x = v.x, y = v.y, p = v.p, q = v.q;
  const double mq_ny = m * q - n * y;
  const double num = m * n * (mq_ny * mq_ny + m * n * (m + n) * (x + p));
  const double den = (m * m * q + n * n * y) * (m * q * x + n * y * p);
  return num / den;
}

Verdict verdict_from_eigenvalues(const std::vector<Complex>& eigs) {
  double scale = 1.0;
  for (const Complex& l : eigs) scale = std::max(scale, std::abs(l));
  const double eps = 1e-9 * scale;
  bool all_negative = true;
  for (const Complex& l : eigs) {
    if (l.real() > eps) return Verdict::Unstable;
    if (!(l.real() < -eps)) all_negative = false;
  }
  return all_negative ? Verdict::Stable : Verdict::Indeterminate;
}

StabilityReport moving_stability_1d2b(const SetupSpec& spec, const InvariantSetDescription& set) {
  if (spec.topology != Topology::OneD_TwoB || set.kind != SetKind::Moving) {
    throw InvalidSetup("moving_stability_1d2b needs a 1D2B moving set");
  }
  StabilityReport r;
  r.set = set;
  const JacobianBundle J = jacobian(spec, set.links);
  r.numeric_eigenvalues = numeric_eigenvalues(J.matrix);
  r.eigenvalues = r.numeric_eigenvalues;
  const JacobianVariables& v = J.vars;
  const RouthResult rh = routh_hurwitz_quartic(char_poly_moving_1d2b(v));
  r.rh_first_column.assign(rh.column.begin(), rh.column.end());
  r.cos2_theta = 1.0 - v.sin2_theta;

  const int sm = sign_of(v.m, std::max(v.x, v.y));
  const int sn = sign_of(v.n, std::max(v.p, v.q));
  const bool perpendicular = std::abs(1.0 - v.sin2_theta) <= 1e-9;
  const std::string cell = "sign-table (m" + sign_text(sm) + ", n" + sign_text(sn) +
                           (perpendicular ? ", perpendicular" : "") + "): ";

  if (sm > 0 && sn > 0) {
    const double bound = moving_cosine_bound(v);
    r.cosine_bound = bound;
    const double tol = 1e-12 * std::max(1.0, bound);
    if (*r.cos2_theta < bound - tol) {
      r.verdict = Verdict::Stable;
      r.rationale = "moving-cosine-bound: cos^2 < bound";
    } else if (*r.cos2_theta > bound + tol) {
      r.verdict = Verdict::Unstable;
      r.rationale = "moving-cosine-bound: cos^2 > bound";
    } else {
      r.verdict = Verdict::Indeterminate;
      r.rationale = "moving-cosine-bound: equality";
    }
    return r;
  }

  r.verdict = Verdict::Unstable;
  if (sm < 0 || sn < 0) {
    if (sm <= 0 && sn <= 0) {
      r.rationale = cell + "c1<0";
    } else {
      r.rationale = cell + "c4<0";
    }
    return r;
  }
  // Remaining cells have m, n >= 0 with at least one zero.
  if (perpendicular) {
    r.verdict = Verdict::Indeterminate;
    r.rationale = cell + "zero eigenvalues, no conclusion";
  } else if (sm == 0 && sn == 0) {
    r.rationale = cell + "c2<0";
  } else {
    r.rationale = cell + "c3<0";
  }
  return r;
}

StabilityReport stability_report(const SetupSpec& spec, const InvariantSetDescription& set) {
  if (set.kind == SetKind::Empty) {
    StabilityReport r;
    r.set = set;
    r.rationale = "empty set";
    return r;
  }
  if (spec.topology == Topology::OneD_TwoB && set.kind == SetKind::Moving) {
    return moving_stability_1d2b(spec, set);
  }

  StabilityReport r;
  r.set = set;
  const JacobianBundle J = jacobian(spec, set.links);
  r.numeric_eigenvalues = numeric_eigenvalues(J.matrix);
  if (auto an = analytic_eigenvalues(spec, set)) {
    r.eigenvalues = *an;
    r.analytic = true;
  } else {
    r.eigenvalues = r.numeric_eigenvalues;
  }
  if (J.matrix.rows() == 4) {
    const RouthResult rh = routh_hurwitz_quartic(
        {J.char_poly(1), J.char_poly(2), J.char_poly(3), J.char_poly(4)});
    r.rh_first_column.assign(rh.column.begin(), rh.column.end());
  }

  if (set.kind != SetKind::Moving) {
    r.verdict = verdict_from_eigenvalues(r.eigenvalues);
    r.rationale = std::string(set.kind == SetKind::FlippedEquilibrium ? "flipped" : "correct") +
                  " equilibrium: closed-form spectrum";
    return r;
  }

  if (spec.topology == Topology::OneD_OneB) {
    r.verdict = Verdict::Unstable;
    r.rationale = "two-robot moving set: eigenvalue x = K_b/d > 0";
    return r;
  }

  const OrderingInfo o = ordering_info(spec, set.ordering.value());
  const JacobianVariables& v = J.vars;
  const double BB = v.p * (o.t + 1.0) + v.x * (o.s + 1.0);
  const double CC = v.p * v.x * ((o.t + 1.0) * (o.s + 1.0) - 1.0);
  const std::string tag = "colinear ordering " + std::string(to_string(o.ordering)) + ": ";
  const double eps = 1e-9 * std::max({1.0, std::abs(BB), std::abs(CC)});
  if (CC < -eps) {
    r.verdict = Verdict::Unstable;
    r.rationale = tag + "CC<0";
  } else if (BB < -eps) {
    r.verdict = Verdict::Unstable;
    r.rationale = tag + "BB<0";
  } else {
    r.verdict = verdict_from_eigenvalues(r.eigenvalues);
    r.rationale = tag + "quadratic factor, eigenvalue signs";
  }
  return r;
}

std::vector<StabilityReport> analyze_all(const SetupSpec& spec) {
  std::vector<StabilityReport> out;
  for (const auto& s : equilibrium_set(spec)) out.push_back(stability_report(spec, s));
  for (const auto& s : moving_set(spec)) out.push_back(stability_report(spec, s));
  return out;
}

}  // namespace hetform
