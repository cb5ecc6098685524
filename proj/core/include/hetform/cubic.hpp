#pragma once

#include <optional>
#include <vector>

namespace hetform {

/// y^3 + c y + d = 0.
struct ReducedCubic {
  double c = 0.0;
  double d = 0.0;

  double operator()(double y) const { return (y * y + c) * y + d; }
  double derivative(double y) const { return 3.0 * y * y + c; }
  /// -4c^3 - 27d^2.
  double discriminant() const { return -4.0 * c * c * c - 27.0 * d * d; }
  /// Scale used for the repeated-root test: max(1, c^2, d^2).
  double discriminant_scale() const;
  /// Residual bound every returned root satisfies.
  double residual_bound() const;
};

enum class DiscriminantClass { ThreeDistinct, Repeated, OneReal };

struct PositiveRootPair {
  double larger = 0.0;
  double smaller = 0.0;
};

struct CubicSolution {
  double discriminant = 0.0;
  DiscriminantClass kind = DiscriminantClass::OneReal;
  /// Modulus and argument of the trigonometric form. Only meaningful when c <= 0.
  double r_v = 0.0;
  double phi_v = 0.0;
  /// Real roots in ascending order, repeated according to multiplicity
  /// (three entries unless kind == OneReal).
  std::vector<double> roots;
  /// Filled for c < 0, d > 0 and a nonnegative discriminant.
  std::optional<PositiveRootPair> positive_roots;

  int positive_count() const;
};

CubicSolution solve_reduced_cubic(const ReducedCubic& eq);

/// Trigonometric-form positive roots for c < 0, d > 0. Empty when the
/// discriminant is negative. Throws std::invalid_argument outside the domain.
std::optional<PositiveRootPair> positive_root_pair(double c, double d);

}  // namespace hetform
