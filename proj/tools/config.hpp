#pragma once

// Declarative scenario files for the fourthorder command line tool.
//
// Config files and stack files are YAML. A scenario file looks like
//
//   regime: quantum            # quantum | classical
//   correlation: correlated    # correlated | independent
//   pump: {omega_rad_s: 6.22e15}
//   pulse: {model: rect_time, t0_s: 20e-15}   # optional center_rad_s
//   barrier_I: none
//   barrier_II: {quarter_wave: {N: 57, n_high: 2.22, n_low: 1.41, omega0: 2.68e15}}
//   scan: {s_min_m: -60e-6, s_max_m: 60e-6, n_points: 241}
//   quadrature: {target_rel_error: 1e-7}
//   classify: {enabled: true, tolerance: 1e-6}
//   sweep: {barrier_II.N: [11, 35, 41]}        # sweep command only
//
// A barrier is `none`, an inline stack description, or the path of a stack
// file (relative to the config file) holding `layers: [{n, d_m}, ...]` or
// `quarter_wave: {N, n_high, n_low, omega0}`.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fourthorder/fourthorder.hpp"

namespace fourthorder::cli {

/// Malformed or inconsistent configuration; the message carries
/// file:line:column and the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BarrierSpec {
  enum class Kind { free_space, layers, quarter_wave };

  Kind kind = Kind::free_space;
  std::vector<Layer> layers;
  int n_layers = 0;
  double n_high = 0.0;
  double n_low = 0.0;
  double omega0 = 0.0;
  std::optional<double> thickness_high;
  std::optional<double> thickness_low;
  std::string origin = "inline";

  Stack build() const;
  std::string describe() const;
};

struct ClassifySettings {
  bool enabled = true;
  double tolerance = 1e-6;
};

struct SweepSpec {
  std::string parameter;
  std::vector<std::string> values;
};

/// Textual mirror of a Scenario plus output settings.
struct ScenarioConfig {
  std::string name;
  Regime regime = Regime::quantum;
  Correlation correlation = Correlation::correlated;
  double pump_frequency = 0.0;
  PulseModel pulse_model = PulseModel::rect_time;
  double half_duration = 0.0;
  std::optional<double> pulse_center;
  BarrierSpec barrier_I;
  BarrierSpec barrier_II;
  ScanRange scan;
  QuadratureSettings quadrature;
  ClassifySettings classify;
  std::optional<SweepSpec> sweep;

  Scenario scenario() const;
};

inline constexpr const char* kSweepParameters[] = {
    "barrier_I.N", "barrier_II.N", "pump.omega_rad_s", "pulse.t0_s",
    "regime",      "correlation"};

/// Parses a scenario from YAML text. `base_dir` resolves stack file
/// references; `source` names the text in diagnostics.
ScenarioConfig parse_config(const std::string& text, const std::string& source,
                            const std::filesystem::path& base_dir);

ScenarioConfig load_config(const std::filesystem::path& path);

BarrierSpec parse_stack(const std::string& text, const std::string& source);

BarrierSpec load_stack_file(const std::filesystem::path& path);

/// Copy of `config` with one sweep value applied.
ScenarioConfig apply_sweep_value(const ScenarioConfig& config,
                                 const std::string& parameter,
                                 const std::string& value);

}  // namespace fourthorder::cli
