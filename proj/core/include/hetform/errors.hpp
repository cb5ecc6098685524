#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace hetform {

/// Two linked robots are closer than the tolerance allowed for forming a bearing.
/// Robot labels are 1-based, matching the usual R1/R2/R3 naming.
class CoincidentRobots : public std::runtime_error {
 public:
  CoincidentRobots(int first, int second,
                   double time = std::numeric_limits<double>::quiet_NaN());

  int first() const { return first_; }
  int second() const { return second_; }
  /// Simulation time of the collision, NaN outside of integration.
  double time() const { return time_; }

 private:
  int first_;
  int second_;
  double time_;
};

/// g12 = ±g13, so the bearing sum has no well-defined direction.
class DegenerateBearings : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteState : public std::runtime_error {
 public:
  explicit NonFiniteState(double time);
  double time() const { return time_; }

 private:
  double time_;
};

/// A SetupSpec or SimParams that violates its invariants.
class InvalidSetup : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hetform
