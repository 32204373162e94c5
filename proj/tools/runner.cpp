#include "runner.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace fourthorder::cli {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("{}: cannot write file", path.string()));
  return file;
}

void finish(std::ofstream& file, const std::filesystem::path& path) {
  file.flush();
  if (!file) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error(
        fmt::format("{}: cannot create output directory", dir.string()));
}

std::string sanitize(const std::string& text) {
  std::string result;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    result.push_back(std::isalnum(c) || ch == '-' || ch == '+' ? ch : '_');
  }
  return result;
}

void emit_number(YAML::Emitter& out, const char* key, double value) {
  out << YAML::Key << key << YAML::Value << format_number(value);
}

void emit_barrier(YAML::Emitter& out, const char* key, const BarrierSpec& spec) {
  const Stack stack = spec.build();
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "description" << YAML::Value << spec.describe();
  out << YAML::Key << "layers" << YAML::Value << stack.size();
  emit_number(out, "optical_thickness_m", stack.optical_thickness());
  out << YAML::EndMap;
}

std::string dip_text(const std::optional<double>& dip) {
  return dip ? format_number(*dip) : std::string("nan");
}

ScenarioConfig with_overrides(const ScenarioConfig& config, const OutputOptions& options) {
  ScenarioConfig result = config;
  if (options.points_per_period)
    result.quadrature.points_per_period = *options.points_per_period;
  return result;
}

void print_summary(std::ostream& out, const std::string& label, const RunResult& r) {
  fmt::print(out, "{}: visibility {:.6f}, R in [{:.6f}, {:.6f}], dip {}", label,
             r.fringe.visibility, r.min_r, r.max_r,
             r.fringe.dip_position ? fmt::format("{:.6g} m", *r.fringe.dip_position)
                                   : std::string("on scan boundary"));
  if (r.verdict) fmt::print(out, ", type {}", to_string(r.verdict->verdict));
  fmt::print(out, ", {} quadrature points\n", r.fringe.quadrature_points);
}

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

RunResult evaluate(const ScenarioConfig& config, const OutputOptions& options) {
  const ScenarioConfig effective = with_overrides(config, options);
  const Scenario scenario = effective.scenario();

  RunResult result;
  result.fringe = scan(scenario);
  const auto [low, high] = std::minmax_element(result.fringe.r_normalized.begin(),
                                               result.fringe.r_normalized.end());
  result.min_r = *low;
  result.max_r = *high;

  if (effective.classify.enabled) {
    const double reach = std::max(std::abs(scenario.scan.s_min), std::abs(scenario.scan.s_max));
    const auto [packet_I, packet_II] = indicator_packets(
        scenario.pulse, scenario.barrier_I, scenario.barrier_II, scenario.pump, reach);
    result.indicator_points = packet_I.spectrum.size();
    result.indicator =
        indicator_scan(packet_I, packet_II, scenario.pump, result.fringe.s_values);
    result.verdict = classify_scan(*result.indicator, effective.classify.tolerance);
  }
  return result;
}

void write_artifacts(const ScenarioConfig& config, const RunResult& result,
                     const std::filesystem::path& out_dir, const std::string& stem) {
  ensure_directory(out_dir);
  const std::string fringe_name = stem + "_fringe.csv";
  const std::string indicator_name = stem + "_indicator.csv";

  {
    const auto path = out_dir / fringe_name;
    std::ofstream csv = open_output(path);
    csv << "s_m,r_normalized\n";
    for (std::size_t i = 0; i < result.fringe.s_values.size(); ++i)
      csv << format_number(result.fringe.s_values[i]) << ','
          << format_number(result.fringe.r_normalized[i]) << '\n';
    finish(csv, path);
  }
  if (result.indicator) {
    const auto path = out_dir / indicator_name;
    std::ofstream csv = open_output(path);
    csv << "s_m,F_value\n";
    for (std::size_t i = 0; i < result.indicator->s_values.size(); ++i)
      csv << format_number(result.indicator->s_values[i]) << ','
          << format_number(result.indicator->values[i]) << '\n';
    finish(csv, path);
  }

  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << config.name;
  out << YAML::Key << "regime" << YAML::Value << std::string(to_string(config.regime));
  out << YAML::Key << "correlation" << YAML::Value
      << std::string(to_string(config.correlation));
  emit_number(out, "pump_omega_rad_s", config.pump_frequency);
  out << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "model" << YAML::Value << std::string(to_string(config.pulse_model));
  emit_number(out, "t0_s", config.half_duration);
  emit_number(out, "center_rad_s", config.pulse_center.value_or(0.5 * config.pump_frequency));
  out << YAML::EndMap;
  emit_barrier(out, "barrier_I", config.barrier_I);
  emit_barrier(out, "barrier_II", config.barrier_II);
  out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
  emit_number(out, "s_min_m", config.scan.s_min);
  emit_number(out, "s_max_m", config.scan.s_max);
  out << YAML::Key << "n_points" << YAML::Value << config.scan.n_points;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "results" << YAML::Value << YAML::BeginMap;
  emit_number(out, "visibility", result.fringe.visibility);
  out << YAML::Key << "dip_position_m" << YAML::Value << dip_text(result.fringe.dip_position);
  out << YAML::Key << "dip_on_boundary" << YAML::Value
      << !result.fringe.dip_position.has_value();
  emit_number(out, "baseline", result.fringe.baseline);
  emit_number(out, "max_r", result.max_r);
  emit_number(out, "min_r", result.min_r);
  out << YAML::EndMap;

  if (result.verdict) {
    out << YAML::Key << "indicator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "verdict" << YAML::Value
        << fmt::format("type {}", to_string(result.verdict->verdict));
    emit_number(out, "min_F", result.verdict->min_indicator);
    emit_number(out, "argmin_s_m", result.verdict->argmin_s);
    emit_number(out, "max_abs_F", result.verdict->max_abs_indicator);
    emit_number(out, "tolerance", config.classify.tolerance);
    out << YAML::Key << "grid_points" << YAML::Value << result.indicator_points;
    out << YAML::EndMap;
  }

  out << YAML::Key << "convergence" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "converged" << YAML::Value << true;
  emit_number(out, "target_rel_error", config.quadrature.target_rel_error);
  emit_number(out, "points_per_period", config.quadrature.points_per_period);
  out << YAML::Key << "quadrature_points" << YAML::Value << result.fringe.quadrature_points;
  out << YAML::EndMap;

  out << YAML::Key << "phase_convention" << YAML::Value << kPhaseConvention;
  out << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fringe_csv" << YAML::Value << fringe_name;
  if (result.indicator) out << YAML::Key << "indicator_csv" << YAML::Value << indicator_name;
  out << YAML::EndMap;
  out << YAML::EndMap;

  const auto path = out_dir / (stem + ".yaml");
  std::ofstream sidecar = open_output(path);
  sidecar << out.c_str() << '\n';
  finish(sidecar, path);
}

int report_error(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return exit_config;
  } catch (const DomainError& e) {
    fmt::print(err, "invalid scenario: {}\n", e.what());
    return exit_config;
  } catch (const ConvergenceError& e) {
    fmt::print(err, "convergence error: {}\n", e.what());
    return exit_convergence;
  } catch (const QuadratureError& e) {
    fmt::print(err, "quadrature error: {}\n", e.what());
    return exit_convergence;
  } catch (const ConsistencyError& e) {
    fmt::print(err, "consistency error: {}\n", e.what());
    return exit_convergence;
  } catch (const DegenerateError& e) {
    fmt::print(err, "degenerate scenario: {}\n", e.what());
    return exit_degenerate;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_failure;
  }
}

int run_command(const std::filesystem::path& config_path, const OutputOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig config = load_config(config_path);
    const RunResult result = evaluate(config, options);
    write_artifacts(with_overrides(config, options), result, options.out_dir, config.name);
    if (!options.quiet) {
      print_summary(out, config.name, result);
      fmt::print(out, "phase convention: {}\n", kPhaseConvention);
      fmt::print(out, "wrote {}\n", (options.out_dir / (config.name + ".yaml")).string());
    }
    return exit_ok;
  } catch (...) {
    return report_error(err);
  }
}

int sweep_command(const std::filesystem::path& config_path, const OutputOptions& options,
                  std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig config = load_config(config_path);
    if (!config.sweep)
      throw ConfigError(fmt::format("{}: sweep: missing the sweep block",
                                    config_path.string()));
    const SweepSpec& sweep = *config.sweep;
    ensure_directory(options.out_dir);
    const auto summary_path = options.out_dir / (config.name + "_sweep.csv");
    std::string summary = "param,visibility,dip_position,max_r,min_r\n";
    for (const std::string& value : sweep.values) {
      ScenarioConfig point = apply_sweep_value(config, sweep.parameter, value);
      point.name = fmt::format("{}_{}_{}", config.name, sanitize(sweep.parameter),
                               sanitize(value));
      const RunResult result = evaluate(point, options);
      write_artifacts(with_overrides(point, options), result, options.out_dir, point.name);
      summary += fmt::format("{},{},{},{},{}\n", value, format_number(result.fringe.visibility),
                             dip_text(result.fringe.dip_position),
                             format_number(result.max_r), format_number(result.min_r));
      if (!options.quiet) print_summary(out, fmt::format("{} = {}", sweep.parameter, value), result);
    }
    std::ofstream csv = open_output(summary_path);
    csv << summary;
    finish(csv, summary_path);
    if (!options.quiet) {
      fmt::print(out, "phase convention: {}\n", kPhaseConvention);
      fmt::print(out, "wrote {}\n", summary_path.string());
    }
    return exit_ok;
  } catch (...) {
    return report_error(err);
  }
}

namespace {

struct Check {
  std::string label;
  bool pass = false;
};

struct Cell {
  std::string row;
  std::string column;
  std::vector<Check> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

ScenarioConfig table_scenario(Regime regime, Correlation correlation, bool distorted) {
  ScenarioConfig config;
  config.regime = regime;
  config.correlation = correlation;
  config.half_duration = 20e-15;
  config.scan = ScanRange{-60e-6, 60e-6, 241};
  if (distorted) {
    config.name = "bragg_edge_N57";
    config.pump_frequency = 6.22e15;
    config.pulse_model = PulseModel::rect_time;
    config.barrier_II.kind = BarrierSpec::Kind::quarter_wave;
    config.barrier_II.n_layers = 57;
    config.barrier_II.n_high = 2.22;
    config.barrier_II.n_low = 1.41;
    config.barrier_II.omega0 = 2.68e15;
  } else {
    config.name = "free_space_gaussian";
    config.pump_frequency = 5.36e15;
    config.pulse_model = PulseModel::gaussian;
  }
  return config;
}

}  // namespace

int check_table1_command(const OutputOptions& options, std::ostream& out,
                         std::ostream& err) {
  try {
    constexpr double bound_tol = 1e-9;
    constexpr double enhancement_tol = 1e-6;
    std::vector<Cell> cells;
    for (Regime regime : {Regime::classical, Regime::quantum}) {
      const bool classical = regime == Regime::classical;
      const double v_free = classical ? 1.0 / 3.0 : 1.0;
      const double v_distorted = classical ? 0.5 : 1.0;
      const std::string v_free_label = classical ? "V <= 1/3" : "V <= 1";
      const std::string v_distorted_label = classical ? "V <= 1/2" : "V <= 1";
      const std::string row = classical ? "classical" : "quantum";

      // Uncorrelated beams, exercised with the strongly distorted packets.
      {
        const RunResult r = evaluate(table_scenario(regime, Correlation::independent, true),
                                     options);
        cells.push_back({row, "uncorrelated (A or B)",
                         {{fmt::format("R <= 1 (max {:.6f})", r.max_r), r.max_r <= 1.0 + bound_tol},
                          {fmt::format("{} ({:.6f})", v_free_label, r.fringe.visibility),
                           r.fringe.visibility <= v_free + 1e-6}}});
      }
      {
        const RunResult r = evaluate(table_scenario(regime, Correlation::correlated, false),
                                     options);
        const bool type_a = r.verdict && r.verdict->verdict == PacketType::TypeA;
        cells.push_back({row, "correlated type A",
                         {{"type A", type_a},
                          {fmt::format("R <= 1 (max {:.6f})", r.max_r),
                           r.max_r <= 1.0 + enhancement_tol},
                          {fmt::format("{} ({:.6f})", v_free_label, r.fringe.visibility),
                           r.fringe.visibility <= v_free + 1e-6}}});
      }
      {
        const RunResult r = evaluate(table_scenario(regime, Correlation::correlated, true),
                                     options);
        const bool type_b = r.verdict && r.verdict->verdict == PacketType::TypeB;
        cells.push_back({row, "correlated type B",
                         {{"type B", type_b},
                          {fmt::format("R > 1 (max {:.6f})", r.max_r), r.max_r > 1.0 + enhancement_tol},
                          {fmt::format("{} ({:.6f})", v_distorted_label, r.fringe.visibility),
                           r.fringe.visibility <= v_distorted + 1e-6}}});
      }
    }

    bool all = true;
    for (const Cell& cell : cells) {
      all = all && cell.pass();
      if (options.quiet) continue;
      fmt::print(out, "{:<10} {:<22} {}", cell.row, cell.column, cell.pass() ? "PASS" : "FAIL");
      for (const Check& check : cell.checks)
        fmt::print(out, "  [{}] {}", check.pass ? "ok" : "x", check.label);
      fmt::print(out, "\n");
    }
    if (!options.quiet) {
      fmt::print(out, "\n{:<10} | {:<22} | {:<18} | {:<18}\n", "", "uncorrelated (A or B)",
                 "correlated A", "correlated B");
      for (std::size_t row = 0; row < 2; ++row)
        fmt::print(out, "{:<10} | {:<22} | {:<18} | {:<18}\n", cells[3 * row].row,
                   cells[3 * row].pass() ? "PASS" : "FAIL",
                   cells[3 * row + 1].pass() ? "PASS" : "FAIL",
                   cells[3 * row + 2].pass() ? "PASS" : "FAIL");
    }
    fmt::print(out, "check-table1: {}\n", all ? "PASS" : "FAIL");
    return all ? exit_ok : exit_failure;
  } catch (...) {
    return report_error(err);
  }
}

int spectrum_command(const SpectrumRequest& request, const OutputOptions& options,
                     std::ostream& out, std::ostream& err) {
  try {
    const BarrierSpec spec = load_stack_file(request.stack_path);
    if (!(request.omega_min > 0.0) || !(request.omega_max > request.omega_min))
      throw ConfigError("spectrum: need 0 < omega_min < omega_max");
    if (request.n_points < 2) throw ConfigError("spectrum: need n_points >= 2");
    const Stack stack = spec.build();
    const std::vector<double> grid =
        linspace(request.omega_min, request.omega_max, request.n_points);
    const ComplexSpectrum t = transmission_spectrum(stack, grid);

    ensure_directory(options.out_dir);
    const std::filesystem::path path = request.output.is_absolute()
                                           ? request.output
                                           : options.out_dir / request.output;
    std::ofstream csv = open_output(path);
    csv << "omega_rad_s,re_t,im_t,abs_t_sq\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Complex v = t.values()[i];
      csv << format_number(t.frequencies()[i]) << ',' << format_number(v.real()) << ','
          << format_number(v.imag()) << ',' << format_number(std::norm(v)) << '\n';
    }
    finish(csv, path);
    if (!options.quiet)
      fmt::print(out, "{}: {} points, wrote {}\n", spec.describe(), t.size(), path.string());
    return exit_ok;
  } catch (...) {
    return report_error(err);
  }
}

}  // namespace fourthorder::cli
