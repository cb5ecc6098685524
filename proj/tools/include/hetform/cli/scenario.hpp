#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetform/hetform.hpp"

namespace hetform::cli {

/// Malformed scenario or sweep file. `key()` is the dotted path of the
/// offending entry ("initial.magnitude", "constraints.bearings_deg[1]").
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Generator { Explicit, AtEquilibrium, AtMoving, Perturbed, Random };

std::string_view to_string(Generator g);

struct InitialCondition {
  Generator generator = Generator::AtEquilibrium;
  /// Explicit positions.
  std::vector<Vec2> positions;
  /// Set family for perturbed starts: "correct", "flipped" or "moving".
  std::string set = "correct";
  /// Index into the chosen family, after the ordering filter.
  int index = 0;
  /// Restricts 1B2D moving sets to one colinear ordering.
  std::optional<Ordering> ordering;
  double magnitude = 0.0;
  std::optional<std::uint64_t> seed;
  /// Half-width of the square random starts are drawn from.
  double bbox = 5.0;
};

struct OutputSelection {
  bool trajectory = true;
  bool report = true;
  bool plot = true;
};

struct Scenario {
  std::string name;
  SetupSpec spec;
  /// Bearings as written in the file.
  std::array<double, 2> bearings_deg{0.0, 0.0};
  InitialCondition initial;
  SimParams sim;
  OutputSelection output;
};

/// Parses and validates a scenario document. Angles are converted to radians
/// here and nowhere else.
Scenario parse_scenario(const std::string& text, const std::string& default_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

/// Resolves the initial configuration. Throws ScenarioError when the
/// generator refers to a set that does not exist.
Configuration initial_configuration(const Scenario& s);

enum class SweepParameter { ThetaDeg, Distance, GainRatio };

std::string_view to_string(SweepParameter p);

struct SweepAxis {
  SweepParameter parameter = SweepParameter::ThetaDeg;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
  double value(int i) const;
};

struct SweepSpec {
  std::string name;
  SetupSpec base;
  std::array<double, 2> bearings_deg{0.0, 0.0};
  std::vector<SweepAxis> axes;
  /// Zero picks the hardware concurrency.
  int threads = 0;
};

SweepSpec parse_sweep(const std::string& text, const std::string& default_name = "sweep");
SweepSpec load_sweep(const std::filesystem::path& path);

/// theta_deg keeps the first bearing and sets the second at first + theta.
/// distance sets both distances. gain_ratio sets K_b = R K_d.
SetupSpec apply_sweep_point(const SweepSpec& sweep, const std::vector<double>& values);

}  // namespace hetform::cli
