#include "hetform/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "hetform/cli/output.hpp"

namespace hetform::cli {
namespace {

namespace fs = std::filesystem;

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const CoincidentRobots& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const NonFiniteState& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void summarize(std::ostream& out, const std::vector<StabilityReport>& analysis) {
  for (const StabilityReport& r : analysis) {
    out << "  " << std::left << std::setw(40) << r.set.label() << ' ' << std::setw(13)
        << to_string(r.verdict) << ' ' << r.rationale << '\n';
  }
}

nlohmann::json sweep_point(const SweepSpec& sweep, const std::vector<double>& values) {
  const SetupSpec s = apply_sweep_point(sweep, values);
  nlohmann::json row;
  for (std::size_t i = 0; i < sweep.axes.size(); ++i) {
    row[std::string(to_string(sweep.axes[i].parameter))] = values[i];
  }
  if (s.edges() == 2 && !row.contains("theta_deg")) {
    row["theta_deg"] = std::remainder(angle_of(s.g_star[1]) - angle_of(s.g_star[0]), 2 * M_PI) * 180.0 / M_PI;
  }
  row["d12"] = s.d_star[0];
  if (s.edges() == 2) row["d13"] = s.d_star[1];
  row["gain_ratio"] = s.gain_ratio();
  try {
    s.validate();
    const auto analysis = analyze_all(s);
    row["d_hat"] = existence_threshold(s.topology, s.gain_ratio());
    int moving = 0, stable = 0, unstable = 0, indeterminate = 0, stable_moving = 0;
    std::string verdicts;
    for (const StabilityReport& r : analysis) {
      if (r.set.kind == SetKind::Moving) ++moving;
      switch (r.verdict) {
        case Verdict::Stable:
          ++stable;
          if (r.set.kind == SetKind::Moving) ++stable_moving;
          break;
        case Verdict::Unstable: ++unstable; break;
        case Verdict::Indeterminate: ++indeterminate; break;
      }
      if (!verdicts.empty()) verdicts += "; ";
      verdicts += r.set.label() + "=" + std::string(to_string(r.verdict));
      if (r.cosine_bound && !row.contains("cosine_bound")) {
        row["cos2_theta"] = *r.cos2_theta;
        row["cosine_bound"] = *r.cosine_bound;
      }
    }
    row["moving_sets"] = moving;
    row["stable"] = stable;
    row["unstable"] = unstable;
    row["indeterminate"] = indeterminate;
    row["stable_moving"] = stable_moving;
    row["verdicts"] = verdicts;
  } catch (const std::exception& e) {
    row["error"] = e.what();
  }
  return row;
}

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

}  // namespace

int run_command(const fs::path& path, const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    Scenario s = load_scenario(path);
    if (opts.dt) s.sim.dt = *opts.dt;
    if (opts.t_end) s.sim.t_end = *opts.t_end;
    const Configuration p0 = initial_configuration(s);
    validate(s.sim, s.spec, p0);
    const auto analysis = analyze_all(s.spec);

    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = integrate(s.spec, p0, s.sim);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path base = opts.out_dir / s.name;
    if (s.output.trajectory) {
      if (opts.format == Format::Csv) {
        auto f = open_output(base.string() + ".trajectory.csv");
        write_trajectory_csv(f, traj, s.spec);
      } else {
        auto f = open_output(base.string() + ".trajectory.json");
        write_trajectory_json(f, traj, s.spec);
      }
    }
    if (s.output.report) {
      RunSummary summary{&traj, s.sim, s.initial, wall};
      auto f = open_output(base.string() + ".report.json");
      f << report_json(s.name, s.spec, s.bearings_deg, analysis, &summary).dump(2) << '\n';
    }
    if (s.output.plot) {
      auto f = open_output(base.string() + ".svg");
      write_svg(f, traj, s.spec, s.name);
    }

    const RegimeClassification& c = traj.terminal;
    out << s.name << " (" << to_string(s.spec.topology) << ")\n";
    summarize(out, analysis);
    out << "  regime: " << to_string(c.kind);
    if (c.moving_index) out << " (moving set " << *c.moving_index << ")";
    out << ", final velocity (" << c.final_velocity.x() << ", " << c.final_velocity.y()
        << "), dt " << traj.dt << ", " << traj.size() << " samples, " << wall << " s\n";
    return int(kOk);
  });
}

int analyze_command(const fs::path& path, const CommandOptions& opts, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = load_scenario(path);
    const auto analysis = analyze_all(s.spec);
    const nlohmann::json report = report_json(s.name, s.spec, s.bearings_deg, analysis);
    const fs::path base = opts.out_dir / s.name;
    if (opts.format == Format::Json) {
      auto f = open_output(base.string() + ".analysis.json");
      f << report.dump(2) << '\n';
    } else {
      auto f = open_output(base.string() + ".analysis.csv");
      f << "label,kind,verdict,rationale,w_x,w_y\n";
      for (const StabilityReport& r : analysis) {
        f << csv_cell(r.set.label()) << ',' << to_string(r.set.kind) << ',' << to_string(r.verdict)
          << ',' << csv_cell(r.rationale) << ',' << csv_cell(r.set.w.x()) << ','
          << csv_cell(r.set.w.y()) << '\n';
      }
    }
    out << s.name << " (" << to_string(s.spec.topology) << "), threshold "
        << report["thresholds"]["topology_threshold"].get<double>() << '\n';
    summarize(out, analysis);
    for (const auto& note : report["notes"]) out << "  note: " << note.get<std::string>() << '\n';
    return int(kOk);
  });
}

int sweep_command(const fs::path& path, const CommandOptions& opts, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const SweepSpec sweep = load_sweep(path);
    std::vector<std::vector<double>> grid{{}};
    for (const SweepAxis& a : sweep.axes) {
      std::vector<std::vector<double>> next;
      for (const auto& prefix : grid) {
        for (int i = 0; i < a.steps; ++i) {
          auto p = prefix;
          p.push_back(a.value(i));
          next.push_back(std::move(p));
        }
      }
      grid = std::move(next);
    }

    const fs::path points = opts.out_dir / (sweep.name + ".points");
    fs::create_directories(points);
    auto point_file = [&](std::size_t i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "point_%06zu.json", i);
      return points / buf;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = std::min<unsigned>(
        sweep.threads > 0 ? static_cast<unsigned>(sweep.threads) : hw,
        static_cast<unsigned>(grid.size()));
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::string failure;
    auto worker = [&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        try {
          auto f = open_output(point_file(i));
          f << sweep_point(sweep, grid[i]).dump() << '\n';
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          failure = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!failure.empty()) throw std::runtime_error(failure);

    std::vector<nlohmann::json> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::ifstream in(point_file(i));
      rows.push_back(nlohmann::json::parse(in));
    }

    std::vector<std::string> columns;
    for (const SweepAxis& a : sweep.axes) columns.emplace_back(to_string(a.parameter));
    for (const char* c : {"theta_deg", "d12", "d13", "gain_ratio", "d_hat", "moving_sets", "stable",
                          "unstable", "indeterminate", "stable_moving", "cos2_theta",
                          "cosine_bound", "verdicts", "error"}) {
      if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.emplace_back(c);
    }

    const fs::path base = opts.out_dir / sweep.name;
    if (opts.format == Format::Json) {
      auto f = open_output(base.string() + ".sweep.json");
      f << nlohmann::json(rows).dump(2) << '\n';
    } else {
      auto f = open_output(base.string() + ".sweep.csv");
      for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << columns[c];
      f << '\n';
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
          f << (c ? "," : "") << (row.contains(columns[c]) ? csv_cell(row[columns[c]]) : "");
        }
        f << '\n';
      }
    }
    out << sweep.name << ": " << rows.size() << " points on " << threads << " threads -> "
        << base.string() << (opts.format == Format::Json ? ".sweep.json" : ".sweep.csv") << '\n';
    return int(kOk);
  });
}

}  // namespace hetform::cli
