#include "hetform/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hetform {
namespace {

constexpr double kRepeatedRootTol = 1e-12;

// Newton steps that are only kept while they shrink the residual.
double polish(const ReducedCubic& eq, double y) {
  for (int it = 0; it < 4; ++it) {
    const double f = eq(y);
    const double df = eq.derivative(y);
    if (f == 0.0 || df == 0.0) break;
    const double next = y - f / df;
    if (!(std::abs(eq(next)) < std::abs(f))) break;
    y = next;
  }
  return y;
}

}  // namespace

double ReducedCubic::discriminant_scale() const {
  return std::max({1.0, c * c, d * d});
}

double ReducedCubic::residual_bound() const {
  return 1e-10 * std::max({1.0, std::pow(std::abs(c), 1.5), std::abs(d)});
}

int CubicSolution::positive_count() const {
  return static_cast<int>(
      std::count_if(roots.begin(), roots.end(), [](double r) { return r > 0.0; }));
}

CubicSolution solve_reduced_cubic(const ReducedCubic& eq) {
  if (!std::isfinite(eq.c) || !std::isfinite(eq.d)) {
    throw std::invalid_argument("solve_reduced_cubic: non-finite coefficient");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CubicSolution sol;
  sol.discriminant = eq.discriminant();
  sol.r_v = nan;
  sol.phi_v = nan;

  const double tol = kRepeatedRootTol * eq.discriminant_scale();
  const double c = eq.c;
  const double d = eq.d;

  bool repeated = std::abs(sol.discriminant) <= tol;
  double a = 0.0;
  if (repeated) {
    // (y - a)^2 (y + 2a): c = -3a^2, d = 2a^3. Tiny coefficients can pass the
    // discriminant test without a genuine double root, so confirm by residual.
    a = (c != 0.0) ? -1.5 * d / c : 0.0;
    repeated = std::abs(eq(a)) <= eq.residual_bound() &&
               std::abs(eq(-2.0 * a)) <= eq.residual_bound();
  }

  if (!repeated && sol.discriminant < 0.0) {
    sol.kind = DiscriminantClass::OneReal;
    const double R = 0.25 * d * d + std::pow(c / 3.0, 3);
    const double sR = std::sqrt(std::max(R, 0.0));
    const double A = -std::cbrt(0.5 * d + (d >= 0.0 ? sR : -sR));
    const double B = (A != 0.0) ? -c / (3.0 * A) : 0.0;
    sol.roots = {polish(eq, A + B)};
    return sol;
  }

  sol.kind = repeated ? DiscriminantClass::Repeated : DiscriminantClass::ThreeDistinct;
  const double c3 = std::min(c, 0.0) / 3.0;
  sol.r_v = std::sqrt(-c3 * c3 * c3);
  const double R = 0.25 * d * d + c3 * c3 * c3;
  sol.phi_v = std::atan2(std::sqrt(std::max(-R, 0.0)), -0.5 * d);

  if (repeated) {
    sol.roots = {a, a, -2.0 * a};
    if (d > 0.0) sol.phi_v = std::numbers::pi;
    if (d < 0.0) sol.phi_v = 0.0;
  } else {
    const double amp = 2.0 * std::sqrt(-c3);
    const double third = sol.phi_v / 3.0;
    constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;
    sol.roots = {polish(eq, amp * std::cos(third)),
                 polish(eq, amp * std::cos(third + kTwoThirdsPi)),
                 polish(eq, amp * std::cos(third + 2.0 * kTwoThirdsPi))};
  }
  std::sort(sol.roots.begin(), sol.roots.end());

  if (c < 0.0 && d > 0.0) {
    sol.positive_roots = PositiveRootPair{sol.roots[2], sol.roots[1]};
  }
  return sol;
}

std::optional<PositiveRootPair> positive_root_pair(double c, double d) {
  if (!(c < 0.0 && d > 0.0)) {
    throw std::invalid_argument("positive_root_pair requires c < 0 and d > 0");
  }
  return solve_reduced_cubic({c, d}).positive_roots;
}

}  // namespace hetform
