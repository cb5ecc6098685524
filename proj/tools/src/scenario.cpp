#include "hetform/cli/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hetform::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

double radians(double deg) { return deg * kPi / 180.0; }

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string indexed(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ScenarioError(path.empty() ? "<root>" : path, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  require_map(node, path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ScenarioError(join(path, key), "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ScenarioError(path, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(path, "cannot convert '" + node.Scalar() + "'");
  }
}

template <class T>
T scalar_or(const YAML::Node& parent, const char* key, const std::string& path, T fallback) {
  const YAML::Node n = parent[key];
  return n ? scalar<T>(n, join(path, key)) : fallback;
}

YAML::Node required(const YAML::Node& parent, const char* key, const std::string& path) {
  const YAML::Node n = parent[key];
  if (!n) throw ScenarioError(join(path, key), "missing required key");
  return n;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ScenarioError(path, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<double>(node[i], indexed(path, i)));
  return out;
}

YAML::Node parse_document(const std::string& text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root || root.IsNull()) throw ScenarioError("<root>", "empty document");
    return root;
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("<root>", std::string("parse error: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// topology, gains and constraints shared by scenario and sweep documents.
void parse_setup(const YAML::Node& root, SetupSpec& spec, std::array<double, 2>& bearings_deg) {
  const std::string name = scalar<std::string>(required(root, "topology", ""), "topology");
  const auto topo = topology_from_string(name);
  if (!topo) throw ScenarioError("topology", "unknown topology '" + name + "'");

  const YAML::Node gains = required(root, "gains", "");
  reject_unknown(gains, "gains", {"K_d", "K_b"});
  const double K_d = scalar<double>(required(gains, "K_d", "gains"), "gains.K_d");
  const double K_b = scalar<double>(required(gains, "K_b", "gains"), "gains.K_b");

  const YAML::Node cons = required(root, "constraints", "");
  reject_unknown(cons, "constraints", {"distances", "bearings_deg"});
  const int edges = robot_count(*topo) - 1;
  const auto d = number_list(required(cons, "distances", "constraints"), "constraints.distances");
  const auto b =
      number_list(required(cons, "bearings_deg", "constraints"), "constraints.bearings_deg");
  if (static_cast<int>(d.size()) != edges) {
    throw ScenarioError("constraints.distances",
                        "expected " + std::to_string(edges) + " entries for " + name);
  }
  if (static_cast<int>(b.size()) != edges) {
    throw ScenarioError("constraints.bearings_deg",
                        "expected " + std::to_string(edges) + " entries for " + name);
  }
  bearings_deg = {b[0], edges == 2 ? b[1] : 0.0};
  std::array<double, 2> dist{d[0], edges == 2 ? d[1] : d[0]};
  // Two-robot setups still get a valid, unused second bearing.
  const double second = edges == 2 ? radians(b[1]) : radians(b[0]) + kPi / 2.0;
  spec = SetupSpec::from_angles(*topo, K_d, K_b, dist, {radians(b[0]), second});
  try {
    spec.validate();
  } catch (const InvalidSetup& e) {
    throw ScenarioError("constraints", e.what());
  }
}

Vec2 point(const YAML::Node& node, const std::string& path) {
  const auto v = number_list(node, path);
  if (v.size() != 2) throw ScenarioError(path, "expected [x, y]");
  return Vec2(v[0], v[1]);
}

std::optional<Generator> generator_from_string(const std::string& g) {
  if (g == "explicit") return Generator::Explicit;
  if (g == "at-equilibrium") return Generator::AtEquilibrium;
  if (g == "at-moving") return Generator::AtMoving;
  if (g == "perturbed") return Generator::Perturbed;
  if (g == "random") return Generator::Random;
  return std::nullopt;
}

InitialCondition parse_initial(const YAML::Node& node, int robots) {
  const std::string path = "initial";
  reject_unknown(node, path, {"generator", "positions", "set", "index", "ordering", "magnitude",
                              "seed", "bbox"});
  InitialCondition ic;
  const std::string g = scalar<std::string>(required(node, "generator", path), "initial.generator");
  const auto gen = generator_from_string(g);
  if (!gen) throw ScenarioError("initial.generator", "unknown generator '" + g + "'");
  ic.generator = *gen;
  ic.index = scalar_or<int>(node, "index", path, 0);
  ic.set = scalar_or<std::string>(node, "set", path, ic.generator == Generator::AtMoving ? "moving" : "correct");
  ic.magnitude = scalar_or<double>(node, "magnitude", path, 0.0);
  ic.bbox = scalar_or<double>(node, "bbox", path, 5.0);
  if (node["seed"]) ic.seed = scalar<std::uint64_t>(node["seed"], "initial.seed");
  if (node["ordering"]) {
    const std::string o = scalar<std::string>(node["ordering"], "initial.ordering");
    for (Ordering cand : {Ordering::I, Ordering::II, Ordering::III, Ordering::IV}) {
      if (o == to_string(cand)) ic.ordering = cand;
    }
    if (!ic.ordering) throw ScenarioError("initial.ordering", "expected I, II, III or IV");
  }

  if (ic.index < 0) throw ScenarioError("initial.index", "must be nonnegative");
  if (ic.set != "correct" && ic.set != "flipped" && ic.set != "moving") {
    throw ScenarioError("initial.set", "expected correct, flipped or moving");
  }
  switch (ic.generator) {
    case Generator::Explicit: {
      const YAML::Node pos = required(node, "positions", path);
      if (!pos.IsSequence() || static_cast<int>(pos.size()) != robots) {
        throw ScenarioError("initial.positions", "expected " + std::to_string(robots) + " points");
      }
      for (std::size_t i = 0; i < pos.size(); ++i) {
        ic.positions.push_back(point(pos[i], indexed("initial.positions", i)));
      }
      break;
    }
    case Generator::Perturbed:
      if (!(ic.magnitude > 0.0)) throw ScenarioError("initial.magnitude", "must be positive");
      if (!ic.seed) throw ScenarioError("initial.seed", "perturbed starts need an explicit seed");
      break;
    case Generator::Random:
      if (!(ic.bbox > 0.0)) throw ScenarioError("initial.bbox", "must be positive");
      if (!ic.seed) throw ScenarioError("initial.seed", "random starts need an explicit seed");
      break;
    default:
      break;
  }
  return ic;
}

SimParams parse_sim(const YAML::Node& node) {
  const std::string path = "sim";
  reject_unknown(node, path, {"dt", "t_end", "record_every", "convergence_tol", "classify_window",
                              "link_tol", "stability_budget"});
  SimParams p;
  p.dt = scalar_or<double>(node, "dt", path, p.dt);
  p.t_end = scalar_or<double>(node, "t_end", path, p.t_end);
  p.record_every = scalar_or<int>(node, "record_every", path, p.record_every);
  p.convergence_tol = scalar_or<double>(node, "convergence_tol", path, p.convergence_tol);
  p.classify_window = scalar_or<int>(node, "classify_window", path, p.classify_window);
  p.link_tol = scalar_or<double>(node, "link_tol", path, p.link_tol);
  p.stability_budget = scalar_or<double>(node, "stability_budget", path, p.stability_budget);
  return p;
}

OutputSelection parse_output(const YAML::Node& node) {
  reject_unknown(node, "output", {"trajectory", "report", "plot"});
  OutputSelection o;
  o.trajectory = scalar_or<bool>(node, "trajectory", "output", o.trajectory);
  o.report = scalar_or<bool>(node, "report", "output", o.report);
  o.plot = scalar_or<bool>(node, "plot", "output", o.plot);
  return o;
}

std::optional<SweepParameter> sweep_parameter_from_string(const std::string& s) {
  if (s == "theta_deg") return SweepParameter::ThetaDeg;
  if (s == "distance") return SweepParameter::Distance;
  if (s == "gain_ratio") return SweepParameter::GainRatio;
  return std::nullopt;
}

}  // namespace

ScenarioError::ScenarioError(std::string key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::Explicit: return "explicit";
    case Generator::AtEquilibrium: return "at-equilibrium";
    case Generator::AtMoving: return "at-moving";
    case Generator::Perturbed: return "perturbed";
    case Generator::Random: return "random";
  }
  return "?";
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::ThetaDeg: return "theta_deg";
    case SweepParameter::Distance: return "distance";
    case SweepParameter::GainRatio: return "gain_ratio";
  }
  return "?";
}

Scenario parse_scenario(const std::string& text, const std::string& default_name) {
  const YAML::Node root = parse_document(text);
  reject_unknown(root, "", {"name", "topology", "gains", "constraints", "initial", "sim", "output"});
  Scenario s;
  s.name = scalar_or<std::string>(root, "name", "", default_name);
  parse_setup(root, s.spec, s.bearings_deg);
  if (root["initial"]) s.initial = parse_initial(root["initial"], s.spec.robots());
  if (root["sim"]) s.sim = parse_sim(root["sim"]);
  if (root["output"]) s.output = parse_output(root["output"]);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.stem().string());
}

Configuration initial_configuration(const Scenario& s) {
  const InitialCondition& ic = s.initial;
  auto pick = [&](const std::string& family) {
    const auto sets = family == "moving" ? moving_set(s.spec) : equilibrium_set(s.spec);
    std::vector<InvariantSetDescription> chosen;
    for (const auto& set : sets) {
      if (family == "moving" ? (!ic.ordering || set.ordering == ic.ordering)
                             : (family == "flipped") == (set.kind == SetKind::FlippedEquilibrium)) {
        chosen.push_back(set);
      }
    }
    if (ic.index >= static_cast<int>(chosen.size())) {
      throw ScenarioError("initial.index", "no " + family + " set with index " +
                                               std::to_string(ic.index) + " (" +
                                               std::to_string(chosen.size()) + " available)");
    }
    return chosen[static_cast<std::size_t>(ic.index)].representative();
  };

  switch (ic.generator) {
    case Generator::Explicit: {
      Configuration c;
      c.p.resize(2 * static_cast<int>(ic.positions.size()));
      for (std::size_t i = 0; i < ic.positions.size(); ++i) c.set_position(static_cast<int>(i), ic.positions[i]);
      return c;
    }
    case Generator::AtEquilibrium:
      return pick(ic.set == "moving" ? "correct" : ic.set);
    case Generator::AtMoving:
      return pick("moving");
    case Generator::Perturbed: {
      Configuration c = pick(ic.set);
      std::mt19937_64 rng(*ic.seed);
      std::uniform_real_distribution<double> u(-ic.magnitude, ic.magnitude);
      for (Eigen::Index i = 0; i < c.p.size(); ++i) c.p(i) += u(rng);
      return c;
    }
    case Generator::Random: {
      std::mt19937_64 rng(*ic.seed);
      std::uniform_real_distribution<double> u(-ic.bbox, ic.bbox);
      const double gap = 0.05 * s.spec.min_distance();
      Configuration c;
      c.p.resize(2 * s.spec.robots());
      for (;;) {
        for (Eigen::Index i = 0; i < c.p.size(); ++i) c.p(i) = u(rng);
        bool ok = (c.position(1) - c.position(0)).norm() > gap;
        if (c.size() == 3) ok = ok && (c.position(2) - c.position(0)).norm() > gap;
        if (ok) return c;
      }
    }
  }
  return {};
}

double SweepAxis::value(int i) const {
  if (steps == 1) return from;
  return from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepSpec parse_sweep(const std::string& text, const std::string& default_name) {
  const YAML::Node root = parse_document(text);
  reject_unknown(root, "", {"name", "topology", "gains", "constraints", "sweep", "threads"});
  SweepSpec s;
  s.name = scalar_or<std::string>(root, "name", "", default_name);
  parse_setup(root, s.base, s.bearings_deg);
  s.threads = scalar_or<int>(root, "threads", "", 0);
  if (s.threads < 0) throw ScenarioError("threads", "must be nonnegative");

  const YAML::Node axes = required(root, "sweep", "");
  if (!axes.IsSequence() || axes.size() == 0 || axes.size() > 2) {
    throw ScenarioError("sweep", "expected a list of one or two axes");
  }
  std::set<SweepParameter> seen;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string path = indexed("sweep", i);
    reject_unknown(axes[i], path, {"parameter", "from", "to", "steps"});
    SweepAxis a;
    const std::string name = scalar<std::string>(required(axes[i], "parameter", path), join(path, "parameter"));
    const auto p = sweep_parameter_from_string(name);
    if (!p) throw ScenarioError(join(path, "parameter"), "unknown parameter '" + name + "'");
    if (!seen.insert(*p).second) throw ScenarioError(join(path, "parameter"), "swept twice");
    a.parameter = *p;
    a.from = scalar<double>(required(axes[i], "from", path), join(path, "from"));
    a.to = scalar<double>(required(axes[i], "to", path), join(path, "to"));
    a.steps = scalar<int>(required(axes[i], "steps", path), join(path, "steps"));
    if (a.steps < 1) throw ScenarioError(join(path, "steps"), "empty range");
    if (a.steps > 1 && !(a.to > a.from)) throw ScenarioError(join(path, "to"), "empty range");
    if (a.parameter == SweepParameter::ThetaDeg && s.base.edges() != 2) {
      throw ScenarioError(join(path, "parameter"), "theta_deg needs a three-robot setup");
    }
    s.axes.push_back(a);
  }
  return s;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  return parse_sweep(read_file(path), path.stem().string());
}

SetupSpec apply_sweep_point(const SweepSpec& sweep, const std::vector<double>& values) {
  SetupSpec s = sweep.base;
  for (std::size_t i = 0; i < sweep.axes.size(); ++i) {
    const double v = values.at(i);
    switch (sweep.axes[i].parameter) {
      case SweepParameter::ThetaDeg:
        s.g_star[1] = unit_from_angle(radians(sweep.bearings_deg[0] + v));
        break;
      case SweepParameter::Distance:
        s.d_star = {v, v};
        break;
      case SweepParameter::GainRatio:
        s.K_b = v * s.K_d;
        break;
    }
  }
  return s;
}

}  // namespace hetform::cli
