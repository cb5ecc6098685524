#include <iostream>

#include <CLI11.hpp>

#include "hetform/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace hetform::cli;
  CLI::App app{"Heterogeneous distance/bearing formation analysis and simulation"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string out_dir = ".";
  std::string format = "csv";
  double dt = 0.0, t_end = 0.0;
  std::string input;

  auto add_common = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", input, what)->required();
    sub->add_option("--out-dir", out_dir, "Directory for emitted files");
    sub->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario and emit trajectory, report and plot");
  add_common(run, "Scenario file");
  CLI::Option* dt_opt = run->add_option("--dt", dt, "Override the time step")->check(CLI::PositiveNumber);
  CLI::Option* t_opt = run->add_option("--t-end", t_end, "Override the horizon")->check(CLI::PositiveNumber);
  CLI::App* analyze = app.add_subcommand("analyze", "Thresholds, invariant sets and verdicts");
  add_common(analyze, "Scenario file");
  CLI::App* sweep = app.add_subcommand("sweep", "Verdicts over a parameter grid");
  add_common(sweep, "Sweep file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchemaError;
  }

  opts.out_dir = out_dir;
  opts.format = format == "json" ? Format::Json : Format::Csv;
  if (*dt_opt) opts.dt = dt;
  if (*t_opt) opts.t_end = t_end;

  if (run->parsed()) return run_command(input, opts, std::cout, std::cerr);
  if (analyze->parsed()) return analyze_command(input, opts, std::cout, std::cerr);
  return sweep_command(input, opts, std::cout, std::cerr);
}
