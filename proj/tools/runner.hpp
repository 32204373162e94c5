#pragma once

// Commands of the fourthorder tool. Each returns the process exit status:
// 0 ok, 2 configuration, 3 convergence or quadrature, 4 degenerate scenario.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace fourthorder::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_convergence = 3,
  exit_degenerate = 4,
};

struct OutputOptions {
  std::filesystem::path out_dir = ".";
  bool quiet = false;
  std::optional<double> points_per_period;
};

/// Everything computed for one scenario.
struct RunResult {
  FringeScan fringe;
  std::optional<IndicatorScan> indicator;
  std::optional<TypeVerdict> verdict;
  std::size_t indicator_points = 0;
  double max_r = 0.0;
  double min_r = 0.0;
};

/// Text stored next to every run describing the phase reference of t.
inline constexpr const char* kPhaseConvention =
    "t is the ratio of the transmitted amplitude at the exit face to the incident "
    "amplitude at the entrance face, excluding free propagation outside the stack. "
    "The common phase cancels in R(s) and in all |.|^2 quantities; it only sets the "
    "absolute offset of the dip position when the two arms differ.";

/// Computes the fringe scan and, when enabled, the indicator and verdict.
RunResult evaluate(const ScenarioConfig& config, const OutputOptions& options);

/// Writes `<stem>_fringe.csv`, `<stem>_indicator.csv` and `<stem>.yaml`.
void write_artifacts(const ScenarioConfig& config, const RunResult& result,
                     const std::filesystem::path& out_dir, const std::string& stem);

/// Shortest round-trip decimal form, stable across runs.
std::string format_number(double value);

/// Maps an exception thrown by the library or the config reader to an exit
/// status and prints its message to `err`.
int report_error(std::ostream& err);

int run_command(const std::filesystem::path& config_path, const OutputOptions& options,
                std::ostream& out, std::ostream& err);

int sweep_command(const std::filesystem::path& config_path, const OutputOptions& options,
                  std::ostream& out, std::ostream& err);

int check_table1_command(const OutputOptions& options, std::ostream& out,
                         std::ostream& err);

struct SpectrumRequest {
  std::filesystem::path stack_path;
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t n_points = 0;
  std::filesystem::path output;  // relative paths resolve against out_dir
};

int spectrum_command(const SpectrumRequest& request, const OutputOptions& options,
                     std::ostream& out, std::ostream& err);

}  // namespace fourthorder::cli
