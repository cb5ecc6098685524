#include "hetform/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace hetform::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> row_values(const Trajectory& traj, std::size_t k) {
  std::vector<double> row{traj.times[k]};
  const Configuration& c = traj.configs[k];
  for (Eigen::Index i = 0; i < c.p.size(); ++i) row.push_back(c.p(i));
  const ErrorVector& e = traj.errors[k];
  for (Eigen::Index i = 0; i < e.size(); ++i) row.push_back(e(i));
  row.push_back(traj.lyapunov[k]);
  return row;
}

nlohmann::json vec(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

// Non-finite numbers become null so the document stays valid JSON.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

nlohmann::json errors_json(const ErrorVector& e) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < e.size(); ++i) out.push_back(num(e(i)));
  return out;
}

nlohmann::json spectrum_json(const std::vector<Complex>& eigs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& l : eigs) out.push_back({{"re", num(l.real())}, {"im", num(l.imag())}});
  return out;
}

nlohmann::json link_json(const Link& l, const char* edge) {
  return {{"edge", edge}, {"distance", l.d}, {"bearing_deg", angle_of(l.g) * 180.0 / kPi}};
}

nlohmann::json set_json(const StabilityReport& r) {
  const InvariantSetDescription& s = r.set;
  nlohmann::json links = nlohmann::json::array();
  if (s.kind != SetKind::Empty) {
    links.push_back(link_json(s.links.l12, "12"));
    if (s.links.l13) links.push_back(link_json(*s.links.l13, "13"));
  }
  nlohmann::json branches = nlohmann::json::array();
  for (RootBranch b : s.branches) branches.push_back(std::string(to_string(b)));
  nlohmann::json j = {
      {"label", s.label()},
      {"kind", std::string(to_string(s.kind))},
      {"ordering", s.ordering ? nlohmann::json(std::string(to_string(*s.ordering))) : nlohmann::json()},
      {"branches", branches},
      {"links", links},
      {"w", vec(s.w)},
      {"errors", errors_json(s.errors)},
      {"eigenvalues", spectrum_json(r.eigenvalues)},
      {"eigenvalue_source", r.analytic ? "closed-form" : "numeric"},
      {"numeric_eigenvalues", spectrum_json(r.numeric_eigenvalues)},
      {"rh_first_column", nlohmann::json::array()},
      {"verdict", std::string(to_string(r.verdict))},
      {"rationale", r.rationale},
      {"cos2_theta", r.cos2_theta ? num(*r.cos2_theta) : nlohmann::json()},
      {"cosine_bound", r.cosine_bound ? num(*r.cosine_bound) : nlohmann::json()},
  };
  for (double c : r.rh_first_column) j["rh_first_column"].push_back(num(c));
  return j;
}

// Maps plane coordinates into the SVG canvas with y pointing up.
struct Canvas {
  double min_x, max_y, scale;
  double x(double px) const { return (px - min_x) * scale; }
  double y(double py) const { return (max_y - py) * scale; }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};

void shape(std::ostream& out, const Canvas& cv, const Configuration& c, Topology t,
           const char* cls, const char* dash) {
  const int n = robot_count(t);
  for (int j = 1; j < n; ++j) {
    out << "  <line class=\"" << cls << "\" x1=\"" << cv.x(c.position(0).x()) << "\" y1=\""
        << cv.y(c.position(0).y()) << "\" x2=\"" << cv.x(c.position(j).x()) << "\" y2=\""
        << cv.y(c.position(j).y()) << "\" stroke=\"#555\" stroke-width=\"1\"" << dash << "/>\n";
  }
}

}  // namespace

std::vector<std::string> trajectory_columns(const SetupSpec& spec) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= spec.robots(); ++i) {
    cols.push_back("x" + std::to_string(i));
    cols.push_back("y" + std::to_string(i));
  }
  cols.push_back("e12d");
  if (spec.edges() == 2) cols.push_back("e13d");
  for (const char* edge : spec.edges() == 2 ? std::vector<const char*>{"12", "13"}
                                            : std::vector<const char*>{"12"}) {
    cols.push_back(std::string("e") + edge + "b_x");
    cols.push_back(std::string("e") + edge + "b_y");
  }
  cols.push_back("V");
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SetupSpec& spec) {
  const auto cols = trajectory_columns(spec);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto row = row_values(traj, k);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << number(row[i]);
    out << '\n';
  }
}

void write_trajectory_json(std::ostream& out, const Trajectory& traj, const SetupSpec& spec) {
  nlohmann::json j;
  j["columns"] = trajectory_columns(spec);
  j["rows"] = nlohmann::json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : row_values(traj, k)) row.push_back(num(v));
    j["rows"].push_back(std::move(row));
  }
  out << j.dump() << '\n';
}

CsvTable read_numeric_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_svg(std::ostream& out, const Trajectory& traj, const SetupSpec& spec,
               const std::string& title) {
  const int n = spec.robots();
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const Configuration& c : traj.configs) {
    for (int i = 0; i < n; ++i) {
      lo_x = std::min(lo_x, c.position(i).x());
      hi_x = std::max(hi_x, c.position(i).x());
      lo_y = std::min(lo_y, c.position(i).y());
      hi_y = std::max(hi_y, c.position(i).y());
    }
  }
  double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double mx = 0.1 * std::max(hi_x - lo_x, 0.1 * span);
  const double my = 0.1 * std::max(hi_y - lo_y, 0.1 * span);
  lo_x -= mx;
  hi_x += mx;
  lo_y -= my;
  hi_y += my;
  span = std::max(hi_x - lo_x, hi_y - lo_y);
  const double width = 600.0;
  const Canvas cv{lo_x, hi_y, width / span};
  const double w = (hi_x - lo_x) * cv.scale;
  const double h = (hi_y - lo_y) * cv.scale;
  const double marker = 0.012 * width;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h
      << "\" width=\"" << w << "\" height=\"" << h << "\">\n"
      << "  <title>" << title << "</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  if (!traj.configs.empty()) {
    shape(out, cv, traj.configs.front(), spec.topology, "initial-shape", " stroke-dasharray=\"6,4\"");
    shape(out, cv, traj.configs.back(), spec.topology, "final-shape", "");
  }
  for (int i = 0; i < n; ++i) {
    out << "  <polyline class=\"trajectory\" data-robot=\"" << i + 1 << "\" fill=\"none\" stroke=\""
        << kColors[i] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < traj.configs.size(); ++k) {
      const Vec2 p = traj.configs[k].position(i);
      out << (k ? " " : "") << short_number(cv.x(p.x())) << ',' << short_number(cv.y(p.y()));
    }
    out << "\"/>\n";
  }
  if (!traj.configs.empty()) {
    for (int i = 0; i < n; ++i) {
      const Vec2 s = traj.configs.front().position(i);
      const Vec2 e = traj.configs.back().position(i);
      out << "  <circle class=\"start\" cx=\"" << cv.x(s.x()) << "\" cy=\"" << cv.y(s.y())
          << "\" r=\"" << marker << "\" fill=\"none\" stroke=\"" << kColors[i] << "\"/>\n";
      const double ex = cv.x(e.x()), ey = cv.y(e.y());
      out << "  <g class=\"end\" stroke=\"" << kColors[i] << "\" stroke-width=\"2\">"
          << "<line x1=\"" << ex - marker << "\" y1=\"" << ey - marker << "\" x2=\"" << ex + marker
          << "\" y2=\"" << ey + marker << "\"/>"
          << "<line x1=\"" << ex - marker << "\" y1=\"" << ey + marker << "\" x2=\"" << ex + marker
          << "\" y2=\"" << ey - marker << "\"/></g>\n";
    }
  }
  out << "</svg>\n";
}

nlohmann::json report_json(const std::string& name, const SetupSpec& spec,
                           const std::array<double, 2>& bearings_deg,
                           const std::vector<StabilityReport>& analysis, const RunSummary* run) {
  nlohmann::json j;
  const int edges = spec.edges();
  nlohmann::json distances = nlohmann::json::array();
  nlohmann::json bearings = nlohmann::json::array();
  for (int e = 0; e < edges; ++e) {
    distances.push_back(spec.d_star[static_cast<std::size_t>(e)]);
    bearings.push_back(bearings_deg[static_cast<std::size_t>(e)]);
  }
  j["scenario"] = {
      {"name", name},
      {"topology", std::string(to_string(spec.topology))},
      {"gains", {{"K_d", spec.K_d}, {"K_b", spec.K_b}, {"R_bd", spec.gain_ratio()}}},
      {"constraints", {{"distances", distances}, {"bearings_deg", bearings}}},
  };

  const ThresholdReport th = existence_thresholds(spec);
  nlohmann::json orderings = nlohmann::json::array();
  for (const OrderingInfo& o : th.orderings) {
    orderings.push_back({{"ordering", std::string(to_string(o.ordering))},
                         {"s", o.s},
                         {"t", o.t},
                         {"D", {o.D[0], o.D[1]}},
                         {"threshold", {o.threshold[0], o.threshold[1]}}});
  }
  j["thresholds"] = {{"topology_threshold", th.topology_threshold},
                     {"edge_thresholds", th.edge_thresholds},
                     {"orderings", orderings}};

  nlohmann::json sets = nlohmann::json::array();
  bool any_moving = false;
  for (const StabilityReport& r : analysis) {
    sets.push_back(set_json(r));
    any_moving |= r.set.kind == SetKind::Moving;
  }
  j["sets"] = sets;
  j["notes"] = nlohmann::json::array();
  if (!any_moving) {
    j["notes"].push_back("moving set empty: global convergence regime");
  }

  if (run && run->trajectory) {
    const Trajectory& t = *run->trajectory;
    const RegimeClassification& c = t.terminal;
    nlohmann::json initial = {{"generator", std::string(to_string(run->initial.generator))}};
    if (run->initial.generator == Generator::Perturbed || run->initial.generator == Generator::AtMoving ||
        run->initial.generator == Generator::AtEquilibrium) {
      initial["set"] = run->initial.set;
      initial["index"] = run->initial.index;
    }
    if (run->initial.ordering) initial["ordering"] = std::string(to_string(*run->initial.ordering));
    if (run->initial.generator == Generator::Perturbed) initial["magnitude"] = run->initial.magnitude;
    if (run->initial.seed) initial["seed"] = *run->initial.seed;
    if (!t.configs.empty()) {
      nlohmann::json p0 = nlohmann::json::array();
      for (int i = 0; i < t.configs.front().size(); ++i) p0.push_back(vec(t.configs.front().position(i)));
      initial["positions"] = p0;
    }
    j["run"] = {
        {"dt", t.dt},
        {"t_end", run->params.t_end},
        {"samples", t.size()},
        {"wall_seconds", run->wall_seconds},
        {"initial", initial},
        {"lyapunov_diagnostic_only", t.lyapunov_diagnostic_only},
        {"regime",
         {{"kind", std::string(to_string(c.kind))},
          {"moving_index", c.moving_index ? nlohmann::json(*c.moving_index) : nlohmann::json()},
          {"final_velocity", {num(c.final_velocity.x()), num(c.final_velocity.y())}},
          {"velocity_dispersion", num(c.velocity_dispersion)},
          {"final_errors", errors_json(c.final_errors)}}},
    };
  }
  return j;
}

}  // namespace hetform::cli
