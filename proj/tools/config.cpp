#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

namespace fourthorder::cli {
namespace {

struct Reader {
  std::string source;
  std::filesystem::path base_dir;

  [[noreturn]] void fail(const YAML::Node& node, std::string_view field,
                         std::string_view message) const {
    const YAML::Mark mark = node.IsDefined() ? node.Mark() : YAML::Mark::null_mark();
    if (mark.is_null())
      throw ConfigError(fmt::format("{}: {}: {}", source, field, message));
    throw ConfigError(fmt::format("{}:{}:{}: {}: {}", source, mark.line + 1,
                                  mark.column + 1, field, message));
  }

  void require_map(const YAML::Node& node, std::string_view field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void check_keys(const YAML::Node& node, std::string_view field,
                  std::initializer_list<std::string_view> allowed) const {
    require_map(node, field);
    for (const auto& entry : node) {
      const std::string key = entry.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        const std::string where =
            field.empty() ? key : fmt::format("{}.{}", field, key);
        fail(entry.first, where, "unknown key");
      }
    }
  }

  YAML::Node required(const YAML::Node& parent, const char* key,
                      std::string_view field) const {
    const YAML::Node node = parent[key];
    if (!node) fail(parent, field, "missing required key");
    return node;
  }

  double number(const YAML::Node& node, std::string_view field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    double value = 0.0;
    try {
      value = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, field, fmt::format("'{}' is not a number", node.Scalar()));
    }
    if (!std::isfinite(value)) fail(node, field, "must be finite");
    return value;
  }

  double positive(const YAML::Node& node, std::string_view field) const {
    const double value = number(node, field);
    if (!(value > 0.0)) fail(node, field, "must be positive");
    return value;
  }

  long integer(const YAML::Node& node, std::string_view field) const {
    if (!node.IsScalar()) fail(node, field, "expected an integer");
    try {
      return node.as<long>();
    } catch (const YAML::Exception&) {
      fail(node, field, fmt::format("'{}' is not an integer", node.Scalar()));
    }
  }

  std::string text(const YAML::Node& node, std::string_view field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  bool boolean(const YAML::Node& node, std::string_view field) const {
    if (!node.IsScalar()) fail(node, field, "expected true or false");
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected true or false");
    }
  }

  BarrierSpec stack(const YAML::Node& node, std::string_view field) const;
  BarrierSpec barrier(const YAML::Node& node, std::string_view field) const;
};

Regime parse_regime(std::string_view text) {
  if (text == "quantum") return Regime::quantum;
  if (text == "classical") return Regime::classical;
  throw ConfigError(fmt::format("regime must be quantum or classical, got '{}'", text));
}

Correlation parse_correlation(std::string_view text) {
  if (text == "correlated") return Correlation::correlated;
  if (text == "independent") return Correlation::independent;
  throw ConfigError(
      fmt::format("correlation must be correlated or independent, got '{}'", text));
}

PulseModel parse_model(std::string_view text) {
  if (text == "rect_time") return PulseModel::rect_time;
  if (text == "gaussian") return PulseModel::gaussian;
  throw ConfigError(fmt::format("pulse model must be rect_time or gaussian, got '{}'", text));
}

BarrierSpec Reader::stack(const YAML::Node& node, std::string_view field) const {
  check_keys(node, field, {"layers", "quarter_wave"});
  if (node["layers"] && node["quarter_wave"])
    fail(node, field, "give either layers or quarter_wave, not both");

  BarrierSpec spec;
  if (const YAML::Node layers = node["layers"]) {
    const std::string where = fmt::format("{}.layers", field);
    if (!layers.IsSequence()) fail(layers, where, "expected a list of {n, d_m}");
    spec.kind = layers.size() == 0 ? BarrierSpec::Kind::free_space
                                   : BarrierSpec::Kind::layers;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string item = fmt::format("{}[{}]", where, i);
      check_keys(layers[i], item, {"n", "d_m"});
      spec.layers.push_back(
          {positive(required(layers[i], "n", item), item + ".n"),
           positive(required(layers[i], "d_m", item), item + ".d_m")});
    }
    return spec;
  }
  if (const YAML::Node qw = node["quarter_wave"]) {
    const std::string where = fmt::format("{}.quarter_wave", field);
    check_keys(qw, where, {"N", "n_high", "n_low", "omega0", "d_high_m", "d_low_m"});
    spec.kind = BarrierSpec::Kind::quarter_wave;
    const long n = integer(required(qw, "N", where), where + ".N");
    if (n < 1) fail(qw["N"], where + ".N", "must be >= 1");
    spec.n_layers = static_cast<int>(n);
    spec.n_high = positive(required(qw, "n_high", where), where + ".n_high");
    spec.n_low = positive(required(qw, "n_low", where), where + ".n_low");
    spec.omega0 = positive(required(qw, "omega0", where), where + ".omega0");
    if (qw["d_high_m"]) spec.thickness_high = positive(qw["d_high_m"], where + ".d_high_m");
    if (qw["d_low_m"]) spec.thickness_low = positive(qw["d_low_m"], where + ".d_low_m");
    return spec;
  }
  fail(node, field, "expected layers or quarter_wave");
}

BarrierSpec Reader::barrier(const YAML::Node& node, std::string_view field) const {
  if (!node || node.IsNull()) return {};
  if (node.IsSequence() && node.size() == 0) return {};
  if (node.IsScalar()) {
    const std::string value = node.Scalar();
    if (value == "none" || value == "free") return {};
    const std::filesystem::path path = base_dir / value;
    try {
      BarrierSpec spec = load_stack_file(path);
      spec.origin = value;
      return spec;
    } catch (const ConfigError& error) {
      fail(node, field, error.what());
    }
  }
  return stack(node, field);
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& error) {
    throw ConfigError(fmt::format("{}:{}:{}: {}", source, error.mark.line + 1,
                                  error.mark.column + 1, error.msg));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Stack BarrierSpec::build() const {
  switch (kind) {
    case Kind::free_space:
      return {};
    case Kind::layers:
      return Stack(layers);
    case Kind::quarter_wave: {
      const Stack design = quarter_wave_stack(n_layers, n_high, n_low, omega0);
      if (!thickness_high && !thickness_low) return design;
      const double quarter_high = design.layers()[0].thickness;
      const double quarter_low =
          n_layers > 1 ? design.layers()[1].thickness : quarter_high * n_high / n_low;
      return alternating_stack(n_layers, n_high, thickness_high.value_or(quarter_high),
                               n_low, thickness_low.value_or(quarter_low));
    }
  }
  return {};
}

std::string BarrierSpec::describe() const {
  switch (kind) {
    case Kind::free_space:
      return "free space";
    case Kind::layers:
      return fmt::format("{} explicit layers ({})", layers.size(), origin);
    case Kind::quarter_wave:
      return fmt::format("quarter-wave N={} n_high={} n_low={} omega0={:g} rad/s ({})",
                         n_layers, n_high, n_low, omega0, origin);
  }
  return {};
}

Scenario ScenarioConfig::scenario() const {
  Scenario result;
  result.regime = regime;
  result.correlation = correlation;
  result.barrier_I = barrier_I.build();
  result.barrier_II = barrier_II.build();
  result.pump = Pump{pump_frequency};
  result.pulse = BandShape{pulse_model, pulse_center.value_or(0.5 * pump_frequency),
                           half_duration};
  result.scan = scan;
  result.quadrature = quadrature;
  validate(result);
  return result;
}

BarrierSpec parse_stack(const std::string& text, const std::string& source) {
  const Reader reader{source, {}};
  const YAML::Node root = load_yaml(text, source);
  return reader.stack(root, "stack");
}

BarrierSpec load_stack_file(const std::filesystem::path& path) {
  BarrierSpec spec = parse_stack(read_file(path), path.string());
  spec.origin = path.filename().string();
  return spec;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source,
                            const std::filesystem::path& base_dir) {
  const Reader reader{source, base_dir};
  const YAML::Node root = load_yaml(text, source);
  reader.check_keys(root, "",
                    {"regime", "correlation", "pump", "pulse", "barrier_I", "barrier_II",
                     "scan", "quadrature", "classify", "sweep"});

  ScenarioConfig config;
  try {
    if (root["regime"]) config.regime = parse_regime(reader.text(root["regime"], "regime"));
  } catch (const ConfigError& error) {
    reader.fail(root["regime"], "regime", error.what());
  }
  try {
    if (root["correlation"])
      config.correlation =
          parse_correlation(reader.text(root["correlation"], "correlation"));
  } catch (const ConfigError& error) {
    reader.fail(root["correlation"], "correlation", error.what());
  }

  const YAML::Node pump = reader.required(root, "pump", "pump");
  reader.check_keys(pump, "pump", {"omega_rad_s"});
  config.pump_frequency =
      reader.positive(reader.required(pump, "omega_rad_s", "pump"), "pump.omega_rad_s");

  const YAML::Node pulse = reader.required(root, "pulse", "pulse");
  reader.check_keys(pulse, "pulse", {"model", "t0_s", "center_rad_s"});
  if (pulse["model"]) {
    try {
      config.pulse_model = parse_model(reader.text(pulse["model"], "pulse.model"));
    } catch (const ConfigError& error) {
      reader.fail(pulse["model"], "pulse.model", error.what());
    }
  }
  config.half_duration =
      reader.positive(reader.required(pulse, "t0_s", "pulse"), "pulse.t0_s");
  if (pulse["center_rad_s"])
    config.pulse_center = reader.positive(pulse["center_rad_s"], "pulse.center_rad_s");

  config.barrier_I = reader.barrier(root["barrier_I"], "barrier_I");
  config.barrier_II = reader.barrier(root["barrier_II"], "barrier_II");

  const YAML::Node scan = reader.required(root, "scan", "scan");
  reader.check_keys(scan, "scan", {"s_min_m", "s_max_m", "n_points"});
  config.scan.s_min = reader.number(reader.required(scan, "s_min_m", "scan"), "scan.s_min_m");
  config.scan.s_max = reader.number(reader.required(scan, "s_max_m", "scan"), "scan.s_max_m");
  const long n_points =
      reader.integer(reader.required(scan, "n_points", "scan"), "scan.n_points");
  if (n_points < 3) reader.fail(scan["n_points"], "scan.n_points", "must be >= 3");
  config.scan.n_points = static_cast<std::size_t>(n_points);
  if (!(config.scan.s_min < config.scan.s_max))
    reader.fail(scan, "scan", "s_min_m must be below s_max_m");

  if (const YAML::Node q = root["quadrature"]) {
    reader.check_keys(q, "quadrature", {"target_rel_error", "points_per_period"});
    if (q["target_rel_error"]) {
      config.quadrature.target_rel_error =
          reader.positive(q["target_rel_error"], "quadrature.target_rel_error");
      if (!(config.quadrature.target_rel_error < 1.0))
        reader.fail(q["target_rel_error"], "quadrature.target_rel_error",
                    "must be below 1");
    }
    if (q["points_per_period"]) {
      config.quadrature.points_per_period =
          reader.positive(q["points_per_period"], "quadrature.points_per_period");
      if (config.quadrature.points_per_period < 2.0)
        reader.fail(q["points_per_period"], "quadrature.points_per_period",
                    "must be >= 2");
    }
  }

  if (const YAML::Node c = root["classify"]) {
    reader.check_keys(c, "classify", {"enabled", "tolerance"});
    if (c["enabled"]) config.classify.enabled = reader.boolean(c["enabled"], "classify.enabled");
    if (c["tolerance"])
      config.classify.tolerance = reader.positive(c["tolerance"], "classify.tolerance");
  }

  if (const YAML::Node sweep = root["sweep"]) {
    reader.require_map(sweep, "sweep");
    if (sweep.size() != 1) reader.fail(sweep, "sweep", "exactly one swept parameter");
    const auto entry = *sweep.begin();
    SweepSpec spec;
    spec.parameter = entry.first.as<std::string>();
    const std::string field = "sweep." + spec.parameter;
    if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters),
                  spec.parameter) == std::end(kSweepParameters))
      reader.fail(entry.first, field, "parameter cannot be swept");
    if (!entry.second.IsSequence() || entry.second.size() == 0)
      reader.fail(entry.second, field, "expected a non-empty list of values");
    for (const auto& value : entry.second) {
      spec.values.push_back(reader.text(value, field));
      try {
        apply_sweep_value(config, spec.parameter, spec.values.back()).scenario();
      } catch (const Error& error) {
        reader.fail(value, field, error.what());
      }
    }
    config.sweep = std::move(spec);
  }

  try {
    config.scenario();
  } catch (const DomainError& error) {
    reader.fail(root, "scenario", error.what());
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  ScenarioConfig config =
      parse_config(read_file(path), path.string(), path.parent_path());
  config.name = path.stem().string();
  return config;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& config,
                                 const std::string& parameter,
                                 const std::string& value) {
  ScenarioConfig result = config;
  result.sweep.reset();
  auto as_number = [&](double& slot) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !(parsed > 0.0))
      throw ConfigError(fmt::format("{}: '{}' is not a positive number", parameter, value));
    slot = parsed;
  };
  auto as_layers = [&](BarrierSpec& barrier) {
    if (barrier.kind != BarrierSpec::Kind::quarter_wave)
      throw ConfigError(fmt::format("{}: barrier is not a quarter_wave design", parameter));
    std::size_t used = 0;
    int parsed = 0;
    try {
      parsed = std::stoi(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || parsed < 1)
      throw ConfigError(fmt::format("{}: '{}' is not a layer count", parameter, value));
    barrier.n_layers = parsed;
  };

  if (parameter == "barrier_I.N") {
    as_layers(result.barrier_I);
  } else if (parameter == "barrier_II.N") {
    as_layers(result.barrier_II);
  } else if (parameter == "pump.omega_rad_s") {
    as_number(result.pump_frequency);
  } else if (parameter == "pulse.t0_s") {
    as_number(result.half_duration);
  } else if (parameter == "regime") {
    result.regime = parse_regime(value);
  } else if (parameter == "correlation") {
    result.correlation = parse_correlation(value);
  } else {
    throw ConfigError(fmt::format("{}: parameter cannot be swept", parameter));
  }
  return result;
}

}  // namespace fourthorder::cli
