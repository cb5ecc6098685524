#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hetform::cli {

enum ExitCode : int { kOk = 0, kSchemaError = 1, kRuntimeError = 2 };

enum class Format { Csv, Json };

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<double> dt;
  std::optional<double> t_end;
  Format format = Format::Csv;
};

/// Each command reports problems on `err` and returns the process exit code:
/// schema or setup errors give 1, collisions and non-finite states give 2.
/// A run that does not converge still succeeds.
int run_command(const std::filesystem::path& scenario, const CommandOptions& opts,
                std::ostream& out, std::ostream& err);
int analyze_command(const std::filesystem::path& scenario, const CommandOptions& opts,
                    std::ostream& out, std::ostream& err);
int sweep_command(const std::filesystem::path& sweep, const CommandOptions& opts,
                  std::ostream& out, std::ostream& err);

}  // namespace hetform::cli
