#pragma once

#include <cstdint>
#include <string>

#include "hetform/hetform.hpp"

namespace hetform::testing {

struct PropertyResult {
  std::string name;
  bool ok = true;
  std::size_t samples = 0;
  double worst = 0.0;
  std::string detail;
};

/// Control output against minus the central-difference gradient of the
/// robot's own potential. Relative error < 1e-6.
PropertyResult check_gradients(Topology topology, int samples, std::uint64_t seed);

/// Assembled Jacobian against central differences of link_rhs. Relative
/// (Frobenius) error < 1e-5, step 1e-6 |z|.
PropertyResult check_jacobians(Topology topology, int samples, std::uint64_t seed);

/// Closed-form 1D2B moving quartic against LU-determinant interpolation.
/// Relative error < 1e-9.
PropertyResult check_moving_char_poly(int samples, std::uint64_t seed);

/// Routh verdict against signs of known roots on random quartics.
PropertyResult check_routh_vs_roots(int samples, std::uint64_t seed);

/// Residual bound and discriminant class of the cubic solver.
PropertyResult check_cubic_residuals(int samples, std::uint64_t seed);

/// 1D1B Lyapunov decay: V non-increasing and dV/dt = -|z12dot|^2 to 1e-4
/// relative, on samples where |z12dot|^2 is at least 1e-3 of its peak.
PropertyResult check_lyapunov_1d1b(int runs, std::uint64_t seed);

std::string describe(const PropertyResult& r);

}  // namespace hetform::testing
