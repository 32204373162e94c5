#pragma once

// Time-integrated coincidence rates behind a 50:50 beam splitter for two
// packets that each crossed a lossless barrier, as a function of the prism
// translation s.
//
// The pump is monochromatic at Omega, so every rate reduces to a single
// integral over omega in (0, Omega). Writing omega = Omega/2 + x, the
// packets p(omega) = T21(omega) f(omega) and the pair weight
// omega (Omega - omega) = Omega^2/4 - x^2, the correlated kernels are
//
//   K0    = int w |p_I(omega) p_II(Omega - omega)|^2
//   K1(s) = int w a(omega) conj(a(Omega - omega)) exp(4 i x s / c),
//           a = conj(p_I) p_II
//
// and the classical baseline adds the two self terms of each arm,
// G0 = 2 K0 + X_I + X_II with G1 = 2 K1. For independent sources
//
//   K1(s) = |int omega a(omega) exp(2 i omega s / c)|^2,  K0 = P_I P_II,
//   G1(s) = 2 K1(s),  G0 = 2 P_I P_II + P_I^2 + P_II^2,
//
// with P = int omega |p|^2. The normalized rate is
// R(s) = (baseline - interference(s)) / baseline.
//
// Grids are mirror symmetric about Omega/2 and the kernel is formed from
// index pairs (i, n-1-i), so the Hermitian symmetry that makes K1 real holds
// exactly on every grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fourthorder/errors.hpp"
#include "fourthorder/multilayer.hpp"
#include "fourthorder/numerics.hpp"
#include "fourthorder/spectra.hpp"

namespace fourthorder {

enum class Regime { quantum, classical };
enum class Correlation { correlated, independent };

constexpr std::string_view to_string(Regime regime) {
  return regime == Regime::quantum ? "quantum" : "classical";
}
constexpr std::string_view to_string(Correlation correlation) {
  return correlation == Correlation::correlated ? "correlated" : "independent";
}

/// Prism translations s_min..s_max in meters, n_points uniform samples.
struct ScanRange {
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t n_points = 0;

  std::vector<double> values() const { return linspace(s_min, s_max, n_points); }
};

struct QuadratureSettings {
  double target_rel_error = 1e-7;
  double points_per_period = 12.0;
  std::size_t initial_points = 129;
  /// Finest grid is (initial_points - 1) * 2^max_level + 1 points.
  int max_level = 14;
};

struct Scenario {
  Regime regime = Regime::quantum;
  Correlation correlation = Correlation::correlated;
  Stack barrier_I;
  Stack barrier_II;
  Pump pump;
  BandShape pulse;
  ScanRange scan;
  QuadratureSettings quadrature;
};

inline void validate(const QuadratureSettings& q) {
  if (!(q.target_rel_error > 0.0) || !(q.target_rel_error < 1.0))
    throw DomainError("quadrature: target_rel_error must lie in (0, 1)");
  if (!(q.points_per_period >= 2.0))
    throw DomainError("quadrature: points_per_period must be >= 2");
  if (q.initial_points < 5 || (q.initial_points - 1) % 4 != 0)
    throw DomainError("quadrature: initial_points must be 4k + 1, k >= 1");
  if (q.max_level < 1 || q.max_level > 20)
    throw DomainError("quadrature: max_level must lie in [1, 20]");
}

inline void validate(const Scenario& scenario) {
  validate(scenario.pump);
  validate(scenario.pulse);
  validate(scenario.quadrature);
  if (!(scenario.scan.s_min < scenario.scan.s_max))
    throw DomainError("scan: s_min must be below s_max");
  if (scenario.scan.n_points < 2) throw DomainError("scan: need n_points >= 2");
  if (!(scenario.pulse.center < scenario.pump.frequency))
    throw DomainError("pulse: center must lie below the pump frequency");
}

/// Transmission amplitude of one interferometer arm as a function of omega.
using Transmission = std::function<Complex(double)>;

inline Transmission stack_transmission(Stack stack) {
  if (stack.empty()) return [](double) { return Complex(1.0, 0.0); };
  return [stack = std::move(stack)](double omega) {
    return transfer_coefficients(stack, omega).transmission;
  };
}

/// Characteristic delay of a pair of barriers, used only to choose the
/// starting quadrature grid.
inline double barrier_delay(const Stack& barrier_I, const Stack& barrier_II) {
  return 2.0 * (barrier_I.optical_thickness() + barrier_II.optical_thickness()) /
         speed_of_light;
}

/// Evaluates and caches the coincidence integrals of one arrangement.
///
/// Kernel tables are built lazily per refinement level, so an instance is
/// not safe for concurrent use; copies are independent.
class CoincidenceIntegrals {
 public:
  CoincidenceIntegrals(const Pump& pump, const BandShape& pulse,
                       Transmission arm_I, Transmission arm_II,
                       const QuadratureSettings& settings,
                       double structure_delay = 0.0)
      : pump_(pump),
        pulse_(pulse),
        arm_I_(std::move(arm_I)),
        arm_II_(std::move(arm_II)),
        settings_(settings),
        window_(packet_window(pulse, pump)) {
    validate(settings_);
    if (!(structure_delay >= 0.0))
      throw DomainError("structure delay must be non-negative");
    // Band-shape oscillation of |f f|^2 plus the barrier phase.
    structure_rate_ = 4.0 * pulse_.half_duration + structure_delay;
    base_intervals_ = settings_.initial_points - 1;
    const std::vector<double> omega = window_.frequencies(settings_.initial_points);
    const double power =
        spectral_power(sample_band_shape(pulse_, omega));
    if (!(power > 0.0)) throw DegenerateError("band shape vanishes on the window");
    amplitude_scale_ = 1.0 / std::sqrt(power);
  }

  explicit CoincidenceIntegrals(const Scenario& scenario)
      : CoincidenceIntegrals(scenario.pump, scenario.pulse,
                             stack_transmission(scenario.barrier_I),
                             stack_transmission(scenario.barrier_II),
                             scenario.quadrature,
                             barrier_delay(scenario.barrier_I, scenario.barrier_II)) {}

  const FrequencyWindow& window() const noexcept { return window_; }
  const Pump& pump() const noexcept { return pump_; }

  /// K0: both photons of a pair, one through each arm.
  double pair_term() {
    return cached(pair_term_, "pair term", [](const Level& l, std::size_t i) {
      return l.pair_weight(i) * std::norm(l.packet_I[i]) * std::norm(l.packet_II[l.mirror(i)]);
    });
  }

  /// Classical self term of arm I (both halves of a pair through arm I).
  double self_term_I() {
    return cached(self_I_, "arm I self term", [](const Level& l, std::size_t i) {
      return l.pair_weight(i) * std::norm(l.packet_I[i]) * std::norm(l.packet_I[l.mirror(i)]);
    });
  }

  double self_term_II() {
    return cached(self_II_, "arm II self term", [](const Level& l, std::size_t i) {
      return l.pair_weight(i) * std::norm(l.packet_II[i]) *
             std::norm(l.packet_II[l.mirror(i)]);
    });
  }

  /// P = int omega |p|^2 for independent sources.
  double power_I() {
    return cached(power_I_, "arm I power", [](const Level& l, std::size_t i) {
      return l.frequency(i) * std::norm(l.packet_I[i]);
    });
  }

  double power_II() {
    return cached(power_II_, "arm II power", [](const Level& l, std::size_t i) {
      return l.frequency(i) * std::norm(l.packet_II[i]);
    });
  }

  /// K1(s) for correlated pairs; real by the omega <-> Omega - omega symmetry.
  double correlated_interference(double s) {
    const double reference = pair_term();
    const double rate = 4.0 * s / speed_of_light;
    const QuadratureResult result = refine_at(
        "correlated interference", s, structure_rate_ + std::abs(rate), reference,
        [&](const Level& level, std::size_t i) {
          return level.correlated_kernel[i] * std::polar(1.0, rate * level.detuning[i]);
        });
    const int final_level = level_of(result.n_points_used);
    const double tolerance = 1e-9 * level_table(final_level).correlated_l1 + 1e-15;
    if (std::abs(result.value.imag()) > tolerance)
      throw QuadratureError("correlated interference at s = " + format_double(s) +
                            " m has imaginary residue " +
                            format_double(result.value.imag()) + " (real part " +
                            format_double(result.value.real()) + ")");
    return result.value.real();
  }

  /// K1(s) for independent sources, |int omega a exp(2 i omega s / c)|^2.
  /// The common factor exp(i Omega s / c) is dropped before integrating.
  double independent_interference(double s) {
    const double reference = std::sqrt(power_I() * power_II());
    const double rate = 2.0 * s / speed_of_light;
    const QuadratureResult result = refine_at(
        "independent interference", s, structure_rate_ + std::abs(rate), reference,
        [&](const Level& level, std::size_t i) {
          return level.independent_kernel[i] * std::polar(1.0, rate * level.detuning[i]);
        });
    return std::norm(result.value);
  }

  double baseline(Regime regime, Correlation correlation) {
    double value = 0.0;
    if (correlation == Correlation::correlated) {
      value = regime == Regime::quantum
                  ? pair_term()
                  : 2.0 * pair_term() + self_term_I() + self_term_II();
    } else {
      const double p1 = power_I();
      const double p2 = power_II();
      value = regime == Regime::quantum ? p1 * p2 : 2.0 * p1 * p2 + p1 * p1 + p2 * p2;
    }
    if (!(value > 0.0) || !std::isfinite(value))
      throw DegenerateError(std::string("baseline of the ") +
                            std::string(to_string(regime)) + "/" +
                            std::string(to_string(correlation)) +
                            " rate vanishes: an arm is blocked or the band shapes do not overlap");
    return value;
  }

  double interference(Regime regime, Correlation correlation, double s) {
    const double kernel = correlation == Correlation::correlated
                              ? correlated_interference(s)
                              : independent_interference(s);
    return regime == Regime::quantum ? kernel : 2.0 * kernel;
  }

  /// Largest omega grid evaluated so far.
  std::size_t max_points_used() const noexcept { return max_points_used_; }

 private:
  struct Level {
    double half_pump = 0.0;
    std::vector<double> detuning;  // x_i = omega_i - Omega/2
    std::vector<Complex> packet_I;
    std::vector<Complex> packet_II;
    std::vector<Complex> correlated_kernel;
    std::vector<Complex> independent_kernel;
    double correlated_l1 = 0.0;

    std::size_t mirror(std::size_t i) const { return detuning.size() - 1 - i; }
    double frequency(std::size_t i) const { return half_pump + detuning[i]; }
    double pair_weight(std::size_t i) const {
      return half_pump * half_pump - detuning[i] * detuning[i];
    }
  };

  static std::string format_double(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
  }

  std::size_t points_at(int level) const {
    return (base_intervals_ << level) + 1;
  }

  int level_of(std::size_t n_points) const {
    int level = 0;
    while (points_at(level) < n_points) ++level;
    return level;
  }

  const Level& level_table(int level) {
    auto found = levels_.find(level);
    if (found != levels_.end()) return found->second;

    const std::size_t n = points_at(level);
    Level table;
    table.half_pump = window_.center;
    table.detuning = window_.detunings(n);
    table.packet_I.resize(n);
    table.packet_II.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double omega = table.frequency(i);
      const double f = amplitude_scale_ * evaluate_detuned(pulse_, omega - pulse_.center);
      table.packet_I[i] = arm_I_(omega) * f;
      table.packet_II[i] = arm_II_(omega) * f;
    }
    std::vector<Complex> a(n);
    for (std::size_t i = 0; i < n; ++i)
      a[i] = std::conj(table.packet_I[i]) * table.packet_II[i];
    table.correlated_kernel.resize(n);
    table.independent_kernel.resize(n);
    std::vector<Complex> abs_kernel(n);
    for (std::size_t i = 0; i < n; ++i) {
      table.correlated_kernel[i] = table.pair_weight(i) * (a[i] * std::conj(a[table.mirror(i)]));
      table.independent_kernel[i] = table.frequency(i) * a[i];
      abs_kernel[i] = std::abs(table.correlated_kernel[i]);
    }
    table.correlated_l1 = integrate(abs_kernel, step_at(level)).value.real();
    max_points_used_ = std::max(max_points_used_, n);
    return levels_.emplace(level, std::move(table)).first->second;
  }

  double step_at(int level) const {
    return window_.width() / static_cast<double>(points_at(level) - 1);
  }

  template <class Select>
  double cached(std::optional<double>& slot, const char* what, Select select) {
    if (slot) return *slot;
    RefineOptions options;
    options.initial_points = points_at(checked_level(start_level(structure_rate_), what, std::nullopt));
    options.target_rel_error = settings_.target_rel_error;
    options.max_doublings = doublings_from(level_of(options.initial_points));
    const QuadratureResult result = run_refinement(
        options,
        [&](const Level& level, std::size_t i) { return Complex(select(level, i)); },
        what, std::nullopt);
    baseline_level_ = std::max(baseline_level_, level_of(result.n_points_used));
    slot = result.value.real();
    return *slot;
  }

  template <class Sample>
  QuadratureResult refine_at(const char* what, double s, double rate,
                             double reference, Sample sample) {
    RefineOptions options;
    options.initial_points =
        points_at(checked_level(std::max(start_level(rate), baseline_level_ - 1), what, s));
    options.target_rel_error = settings_.target_rel_error;
    options.max_doublings = doublings_from(level_of(options.initial_points));
    options.reference_scale = reference;
    return run_refinement(options, sample, what, s);
  }

  template <class Sample>
  QuadratureResult run_refinement(const RefineOptions& options, Sample sample,
                                  const char* what, std::optional<double> s) {
    try {
      return refine_until(
          [&](std::size_t n) {
            const Level& level = level_table(level_of(n));
            std::vector<Complex> values(n);
            for (std::size_t i = 0; i < n; ++i) values[i] = sample(level, i);
            return values;
          },
          window_.lower(), window_.upper(), options);
    } catch (const ConvergenceError& error) {
      std::string where = std::string(what);
      if (s) where += " at s = " + format_double(*s) + " m";
      throw ConvergenceError(where + ": " + error.what(), error.previous(),
                             error.last());
    }
  }

  int start_level(double rate) const {
    const std::size_t required =
        intervals_for_rate(window_.width(), rate, settings_.points_per_period);
    return refinement_level(required, base_intervals_);
  }

  int checked_level(int level, const char* what, std::optional<double> s) const {
    if (level >= settings_.max_level) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      std::string where = std::string(what);
      if (s) where += " at s = " + format_double(*s) + " m";
      throw ConvergenceError(where + ": the oscillation rate needs more than " +
                                 std::to_string(points_at(settings_.max_level)) +
                                 " points on the starting grid",
                             nan, nan);
    }
    return level;
  }

  int doublings_from(int level) const {
    return std::clamp(settings_.max_level - level, 1, 16);
  }

  Pump pump_;
  BandShape pulse_;
  Transmission arm_I_;
  Transmission arm_II_;
  QuadratureSettings settings_;
  FrequencyWindow window_;
  double structure_rate_ = 0.0;
  double amplitude_scale_ = 1.0;
  std::size_t base_intervals_ = 128;
  int baseline_level_ = 0;
  std::size_t max_points_used_ = 0;
  std::map<int, Level> levels_;
  std::optional<double> pair_term_;
  std::optional<double> self_I_;
  std::optional<double> self_II_;
  std::optional<double> power_I_;
  std::optional<double> power_II_;
};

namespace detail {

inline void require(const Scenario& scenario, Regime regime,
                    Correlation correlation, const char* op) {
  validate(scenario);
  if (scenario.regime != regime || scenario.correlation != correlation)
    throw DomainError(std::string(op) + " needs a " + std::string(to_string(regime)) +
                      "/" + std::string(to_string(correlation)) + " scenario");
}

inline double check_classical_bound(double g1, double g0) {
  if (std::abs(g1) > 0.5 * g0 * (1.0 + 1e-9))
    throw ConsistencyError("classical interference term exceeds half the baseline");
  return g1;
}

}  // namespace detail

/// Quantum correlated baseline K0.
inline double k0(const Scenario& scenario) {
  detail::require(scenario, Regime::quantum, Correlation::correlated, "k0");
  return CoincidenceIntegrals(scenario).baseline(Regime::quantum,
                                                 Correlation::correlated);
}

/// Quantum correlated interference term K1(s).
inline double k1(const Scenario& scenario, double s) {
  detail::require(scenario, Regime::quantum, Correlation::correlated, "k1");
  return CoincidenceIntegrals(scenario).correlated_interference(s);
}

/// Classical correlated baseline G0 = 2 K0 + X_I + X_II.
inline double g0(const Scenario& scenario) {
  detail::require(scenario, Regime::classical, Correlation::correlated, "g0");
  return CoincidenceIntegrals(scenario).baseline(Regime::classical,
                                                 Correlation::correlated);
}

/// Classical correlated interference term G1(s) = 2 K1(s), |G1| <= G0 / 2.
inline double g1(const Scenario& scenario, double s) {
  detail::require(scenario, Regime::classical, Correlation::correlated, "g1");
  CoincidenceIntegrals integrals(scenario);
  const double value =
      integrals.interference(Regime::classical, Correlation::correlated, s);
  return detail::check_classical_bound(
      value, integrals.baseline(Regime::classical, Correlation::correlated));
}

inline double k1_independent(const Scenario& scenario, double s) {
  detail::require(scenario, Regime::quantum, Correlation::independent,
                  "k1_independent");
  return CoincidenceIntegrals(scenario).independent_interference(s);
}

inline double g1_independent(const Scenario& scenario, double s) {
  detail::require(scenario, Regime::classical, Correlation::independent,
                  "g1_independent");
  return CoincidenceIntegrals(scenario).interference(
      Regime::classical, Correlation::independent, s);
}

/// (R_max - R_min) / (R_max + R_min) over the sampled values.
inline double visibility(std::span<const double> values) {
  if (values.empty()) throw DomainError("visibility: empty scan");
  double low = values[0];
  double high = values[0];
  for (double v : values) {
    if (!(v >= -1e-9)) throw DomainError("visibility: negative coincidence rate");
    low = std::min(low, v);
    high = std::max(high, v);
  }
  if (!(high > 0.0)) throw DegenerateError("visibility: scan is identically zero");
  return (high - low) / (high + low);
}

/// Location of the global minimum, refined by a parabola through the grid
/// argmin and its two neighbours.
inline double dip_position(std::span<const double> s_values,
                           std::span<const double> r_values) {
  if (s_values.size() != r_values.size() || s_values.size() < 3)
    throw DomainError("dip_position: need >= 3 matching samples");
  std::size_t best = 0;
  for (std::size_t i = 1; i < r_values.size(); ++i)
    if (r_values[i] < r_values[best]) best = i;
  if (best == 0 || best + 1 == r_values.size())
    throw BoundaryExtremumError("dip_position: minimum at the scan boundary s = " +
                                std::to_string(s_values[best]) +
                                " m; widen the scan range");
  return parabolic_vertex(s_values[best - 1], s_values[best], s_values[best + 1],
                          r_values[best - 1], r_values[best], r_values[best + 1]);
}

struct FringeScan {
  std::vector<double> s_values;      // meters
  std::vector<double> r_normalized;  // R(s) / R(infinity)
  std::vector<double> interference;  // K1(s) or G1(s)
  double baseline = 0.0;             // K0 or G0
  double visibility = 0.0;
  std::optional<double> dip_position;  // empty when the minimum is on the boundary or n < 3
  std::size_t quadrature_points = 0;   // largest omega grid used
};

inline double dip_position(const FringeScan& scan) {
  return dip_position(scan.s_values, scan.r_normalized);
}

/// Fringe scan over explicit translations with a prepared integrator.
///
/// Points are evaluated in order; each point depends only on s and the
/// shared baseline.
inline FringeScan scan_with(CoincidenceIntegrals& integrals, Regime regime,
                            Correlation correlation, std::span<const double> s_values) {
  FringeScan result;
  result.s_values.assign(s_values.begin(), s_values.end());
  result.baseline = integrals.baseline(regime, correlation);
  result.r_normalized.reserve(s_values.size());
  result.interference.reserve(s_values.size());
  for (double s : s_values) {
    const double term = integrals.interference(regime, correlation, s);
    if (regime == Regime::classical && correlation == Correlation::correlated)
      detail::check_classical_bound(term, result.baseline);
    const double r = (result.baseline - term) / result.baseline;
    if (r < -1e-9)
      throw QuadratureError("normalized rate " + std::to_string(r) + " at s = " +
                            std::to_string(s) + " m is negative");
    result.interference.push_back(term);
    result.r_normalized.push_back(r);
  }
  result.visibility = visibility(result.r_normalized);
  if (result.s_values.size() >= 3) {
    try {
      result.dip_position = dip_position(result.s_values, result.r_normalized);
    } catch (const BoundaryExtremumError&) {
      result.dip_position.reset();
    }
  }
  result.quadrature_points = integrals.max_points_used();
  return result;
}

inline FringeScan scan(const Scenario& scenario) {
  validate(scenario);
  CoincidenceIntegrals integrals(scenario);
  const std::vector<double> s_values = scenario.scan.values();
  return scan_with(integrals, scenario.regime, scenario.correlation, s_values);
}

}  // namespace fourthorder
