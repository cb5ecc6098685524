#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetform/cli/scenario.hpp"

namespace hetform::cli {

/// t, x_i, y_i per robot, error components, V.
std::vector<std::string> trajectory_columns(const SetupSpec& spec);

/// One row per recorded sample, every value printed with 17 significant digits
/// so the text re-parses to the same doubles.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SetupSpec& spec);
void write_trajectory_json(std::ostream& out, const Trajectory& traj, const SetupSpec& spec);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numeric CSV reader for files written by this tool.
CsvTable read_numeric_csv(std::istream& in);

/// Static SVG of the robot paths: one polyline per robot, a circle at each
/// start, a cross at each end, the initial shape dashed and the final shape
/// solid. The view box is the bounding box plus a 10% margin, y pointing up.
void write_svg(std::ostream& out, const Trajectory& traj, const SetupSpec& spec,
               const std::string& title);

struct RunSummary {
  const Trajectory* trajectory = nullptr;
  SimParams params;
  InitialCondition initial;
  double wall_seconds = 0.0;
};

nlohmann::json report_json(const std::string& name, const SetupSpec& spec,
                           const std::array<double, 2>& bearings_deg,
                           const std::vector<StabilityReport>& analysis,
                           const RunSummary* run = nullptr);

}  // namespace hetform::cli
