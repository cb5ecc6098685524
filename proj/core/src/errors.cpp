#include "hetform/errors.hpp"

#include <cmath>
#include <sstream>

namespace hetform {
namespace {

std::string coincident_message(int first, int second, double time) {
  std::ostringstream os;
  os << "robots " << first << " and " << second << " coincide";
  if (!std::isnan(time)) os << " at t=" << time;
  return os.str();
}

std::string non_finite_message(double time) {
  std::ostringstream os;
  os << "non-finite state at t=" << time;
  return os.str();
}

}  // namespace

CoincidentRobots::CoincidentRobots(int first, int second, double time)
    : std::runtime_error(coincident_message(first, second, time)),
      first_(first),
      second_(second),
      time_(time) {}

NonFiniteState::NonFiniteState(double time)
    : std::runtime_error(non_finite_message(time)), time_(time) {}

}  // namespace hetform
