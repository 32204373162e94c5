#pragma once

// Fourier indicator of a packet pair and the type A / type B verdict.
//
// With x the detuning from Omega/2 and p(x) the packet at Omega/2 + x,
//
//   F(4s) = int_{-Omega/2}^{Omega/2} exp(4 i s x / c) (Omega^2/4 - x^2)
//           p_I(x) conj(p_II(x)) p_II(-x) conj(p_I(-x)) dx .
//
// Substituting omega = Omega/2 + x turns the integrand into the complex
// conjugate of the correlated interference kernel, hence F(4s) = K1(-s).
// A pair whose indicator never goes negative (type A) therefore has
// K1 >= 0 for every s and cannot push R(s) above one.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fourthorder/errors.hpp"
#include "fourthorder/interference.hpp"
#include "fourthorder/multilayer.hpp"
#include "fourthorder/numerics.hpp"
#include "fourthorder/spectra.hpp"

namespace fourthorder {

enum class PacketType { TypeA, TypeB };

constexpr std::string_view to_string(PacketType type) {
  return type == PacketType::TypeA ? "A" : "B";
}

struct TypeVerdict {
  PacketType verdict = PacketType::TypeA;
  double min_indicator = 0.0;  // most negative F found
  double argmin_s = 0.0;       // meters
  double max_abs_indicator = 0.0;
};

namespace detail {

/// Checks that both packets share one uniform grid, mirror symmetric about
/// Omega/2, strictly inside (0, Omega). Returns the grid step.
inline double check_indicator_grid(const EffectivePacket& first,
                                   const EffectivePacket& second, const Pump& pump) {
  validate(pump);
  const auto omega = first.spectrum.frequencies();
  const auto other = second.spectrum.frequencies();
  const std::size_t n = omega.size();
  if (other.size() != n)
    throw DomainError("fourier_indicator: packets are tabulated on different grids");
  for (std::size_t i = 0; i < n; ++i)
    if (omega[i] != other[i])
      throw DomainError("fourier_indicator: packets are tabulated on different grids");
  if (n < 3 || n % 2 == 0)
    throw DomainError("fourier_indicator: grid needs an odd number >= 3 of points");
  if (!(omega.back() < pump.frequency))
    throw DomainError("fourier_indicator: grid leaves the window (0, Omega)");
  const double step = (omega.back() - omega.front()) / static_cast<double>(n - 1);
  const double tolerance = 1e-9 * pump.frequency;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(omega[i] + omega[n - 1 - i] - pump.frequency) > tolerance)
      throw DomainError("fourier_indicator: grid is not symmetric about Omega/2");
    if (i > 0 && std::abs(omega[i] - omega[i - 1] - step) > 1e-6 * step)
      throw DomainError("fourier_indicator: grid is not uniform");
  }
  return step;
}

}  // namespace detail

inline constexpr double indicator_points_per_period = 12.0;

/// F(4s) for packets tabulated on a common grid; see the file comment.
inline double fourier_indicator(const EffectivePacket& packet_I,
                                const EffectivePacket& packet_II, const Pump& pump,
                                double s) {
  const double step = detail::check_indicator_grid(packet_I, packet_II, pump);
  const auto omega = packet_I.spectrum.frequencies();
  const auto p1 = packet_I.spectrum.values();
  const auto p2 = packet_II.spectrum.values();
  const std::size_t n = omega.size();

  const double rate = 4.0 * s / speed_of_light;
  const double period = 2.0 * std::numbers::pi / std::abs(rate);
  if (rate != 0.0 && step > period / indicator_points_per_period)
    throw DomainError("fourier_indicator: grid too coarse to resolve s = " +
                      std::to_string(s) + " m");

  const double quarter_pump_sq = 0.25 * pump.frequency * pump.frequency;
  std::vector<Complex> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = p1[i] * std::conj(p2[i]);

  std::vector<Complex> integrand(n);
  std::vector<Complex> magnitude(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = n - 1 - i;
    const double x = 0.5 * (omega[i] - omega[m]);
    const Complex term = (quarter_pump_sq - x * x) * (b[i] * std::conj(b[m]));
    integrand[i] = term * std::polar(1.0, rate * x);
    magnitude[i] = std::abs(term);
  }
  const Complex value = integrate(integrand, step).value;
  const double l1 = integrate(magnitude, step).value.real();
  if (std::abs(value.imag()) > 1e-9 * l1 + 1e-15)
    throw QuadratureError("fourier_indicator: imaginary residue " +
                          std::to_string(value.imag()) + " at s = " +
                          std::to_string(s) + " m; packets lack the symmetry "
                          "that makes F real");
  return value.real();
}

struct IndicatorScan {
  std::vector<double> s_values;
  std::vector<double> values;  // F(4s)
};

inline IndicatorScan indicator_scan(const EffectivePacket& packet_I,
                                    const EffectivePacket& packet_II,
                                    const Pump& pump, std::span<const double> s_values) {
  IndicatorScan result;
  result.s_values.assign(s_values.begin(), s_values.end());
  result.values.reserve(s_values.size());
  for (double s : s_values)
    result.values.push_back(fourier_indicator(packet_I, packet_II, pump, s));
  return result;
}

/// TypeA iff min F >= -tolerance * max |F| over the scanned translations.
inline TypeVerdict classify_scan(const IndicatorScan& scan, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("classify: tolerance must be positive");
  if (scan.values.empty()) throw DomainError("classify: empty indicator scan");
  TypeVerdict verdict;
  verdict.min_indicator = scan.values[0];
  verdict.argmin_s = scan.s_values[0];
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    verdict.max_abs_indicator = std::max(verdict.max_abs_indicator, std::abs(scan.values[i]));
    if (scan.values[i] < verdict.min_indicator) {
      verdict.min_indicator = scan.values[i];
      verdict.argmin_s = scan.s_values[i];
    }
  }
  if (!(verdict.max_abs_indicator > 0.0))
    throw DegenerateError("classify: indicator vanishes for every s");
  verdict.verdict = verdict.min_indicator >= -tolerance * verdict.max_abs_indicator
                        ? PacketType::TypeA
                        : PacketType::TypeB;
  return verdict;
}

inline TypeVerdict classify_type(const EffectivePacket& packet_I,
                                 const EffectivePacket& packet_II, const Pump& pump,
                                 double s_min, double s_max, std::size_t n_points,
                                 double tolerance = 1e-6) {
  if (n_points < 32) throw DomainError("classify_type: need n_points >= 32");
  const std::vector<double> s_values = linspace(s_min, s_max, n_points);
  return classify_scan(indicator_scan(packet_I, packet_II, pump, s_values), tolerance);
}

/// Both effective packets on one grid fine enough for translations up to
/// `max_abs_s`, using the same window as the coincidence integrals.
///
/// The grid starts at twice the sampling rule of the coincidence integrals
/// and is doubled until the indicator at nine probe translations in
/// [-max_abs_s, max_abs_s] changes by less than target_rel_error times the
/// largest probe value.
inline std::pair<EffectivePacket, EffectivePacket> indicator_packets(
    const BandShape& pulse, const Stack& barrier_I, const Stack& barrier_II,
    const Pump& pump, double max_abs_s, double target_rel_error = 1e-7,
    int max_doublings = 6) {
  if (!(target_rel_error > 0.0))
    throw DomainError("indicator_packets: target_rel_error must be positive");
  const FrequencyWindow window = packet_window(pulse, pump);
  const double reach = std::abs(max_abs_s);
  const double rate = 4.0 * reach / speed_of_light + 4.0 * pulse.half_duration +
                      barrier_delay(barrier_I, barrier_II);
  const std::size_t required =
      2 * intervals_for_rate(window.width(), rate, indicator_points_per_period);
  std::size_t intervals = std::size_t{128} << refinement_level(required, 128);

  auto build = [&](std::size_t n_intervals) {
    const std::vector<double> grid = window.frequencies(n_intervals + 1);
    return std::pair{effective_packet(pulse, barrier_I, grid),
                     effective_packet(pulse, barrier_II, grid)};
  };
  const std::vector<double> probes =
      reach > 0.0 ? linspace(-reach, reach, 9) : std::vector<double>{0.0};
  auto evaluate = [&](const std::pair<EffectivePacket, EffectivePacket>& packets) {
    std::vector<double> values;
    for (double s : probes)
      values.push_back(fourier_indicator(packets.first, packets.second, pump, s));
    return values;
  };

  auto coarse = build(intervals);
  // Both packets are normalized on their own grid, so values compare directly.
  std::vector<double> before = evaluate(coarse);
  for (int doubling = 1; doubling <= max_doublings; ++doubling) {
    intervals *= 2;
    auto fine = build(intervals);
    const std::vector<double> after = evaluate(fine);
    double scale = 0.0;
    double change = 0.0;
    for (std::size_t k = 0; k < after.size(); ++k) {
      scale = std::max(scale, std::abs(after[k]));
      change = std::max(change, std::abs(after[k] - before[k]));
    }
    if (change <= target_rel_error * scale) return fine;
    before = after;
    coarse = std::move(fine);
  }
  throw ConvergenceError("indicator_packets: indicator still changing after " +
                             std::to_string(max_doublings) + " doublings (" +
                             std::to_string(intervals + 1) + " points)",
                         before.front(), before.back());
}

}  // namespace fourthorder
