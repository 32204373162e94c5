#pragma once

// Spectral band shapes of the down-conversion photons and the packets that
// reach the beam splitter after the barriers.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "fourthorder/errors.hpp"
#include "fourthorder/multilayer.hpp"
#include "fourthorder/numerics.hpp"

namespace fourthorder {

enum class PulseModel {
  rect_time,  // rectangular temporal window of full width 2 t0 -> sinc spectrum
  gaussian,   // exp(-(omega - center)^2 t0^2 / 2)
};

constexpr std::string_view to_string(PulseModel model) {
  return model == PulseModel::rect_time ? "rect_time" : "gaussian";
}

struct BandShape {
  PulseModel model = PulseModel::rect_time;
  double center = 0.0;         // rad/s
  double half_duration = 0.0;  // t0, seconds
};

inline void validate(const BandShape& shape) {
  if (!(shape.center > 0.0) || !std::isfinite(shape.center))
    throw DomainError("band shape: center frequency must be positive");
  if (!(shape.half_duration > 0.0) || !std::isfinite(shape.half_duration))
    throw DomainError("band shape: half duration must be positive");
}

/// Monochromatic pump line.
struct Pump {
  double frequency = 0.0;  // Omega, rad/s
};

inline void validate(const Pump& pump) {
  if (!(pump.frequency > 0.0) || !std::isfinite(pump.frequency))
    throw DomainError("pump: frequency must be positive");
}

/// Band shape centered at half the pump frequency.
inline BandShape degenerate_pulse(PulseModel model, double half_duration,
                                  const Pump& pump) {
  BandShape shape{model, 0.5 * pump.frequency, half_duration};
  validate(shape);
  return shape;
}

/// Amplitude at `detuning` = omega - center. Even in the detuning.
inline double evaluate_detuned(const BandShape& shape, double detuning) {
  const double x = std::abs(detuning) * shape.half_duration;
  switch (shape.model) {
    case PulseModel::rect_time:
      if (x < 1e-4) return 1.0 - x * x / 6.0;
      return std::sin(x) / x;
    case PulseModel::gaussian:
      return std::exp(-0.5 * x * x);
  }
  return 0.0;
}

/// Real-valued band-shape amplitude f(omega).
inline double evaluate_band_shape(const BandShape& shape, double frequency) {
  if (!(frequency >= 0.0)) throw DomainError("band shape: frequency must be >= 0");
  return evaluate_detuned(shape, frequency - shape.center);
}

inline ComplexSpectrum sample_band_shape(const BandShape& shape,
                                         std::span<const double> grid) {
  validate(shape);
  std::vector<Complex> values;
  values.reserve(grid.size());
  for (double omega : grid) values.emplace_back(evaluate_band_shape(shape, omega), 0.0);
  return ComplexSpectrum(std::vector<double>(grid.begin(), grid.end()),
                         std::move(values));
}

/// Trapezoid estimate of the integral of |f|^2 over the tabulated grid.
inline double spectral_power(const ComplexSpectrum& spectrum) {
  const auto omega = spectrum.frequencies();
  const auto f = spectrum.values();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    total += 0.5 * (omega[i + 1] - omega[i]) * (std::norm(f[i]) + std::norm(f[i + 1]));
  return total;
}

/// Rescales so that the trapezoid integral of |f|^2 is one.
inline ComplexSpectrum normalize(const ComplexSpectrum& spectrum) {
  const double power = spectral_power(spectrum);
  if (!(power > 0.0))
    throw DegenerateError("normalize: spectrum vanishes on the whole grid");
  const double scale = 1.0 / std::sqrt(power);
  std::vector<Complex> values(spectrum.values().begin(), spectrum.values().end());
  for (Complex& v : values) v *= scale;
  const auto omega = spectrum.frequencies();
  return ComplexSpectrum(std::vector<double>(omega.begin(), omega.end()),
                         std::move(values));
}

/// Packet entering the beam splitter: T21(omega) f(omega).
struct EffectivePacket {
  ComplexSpectrum spectrum;
};

inline EffectivePacket effective_packet(const BandShape& shape, const Stack& stack,
                                        std::span<const double> grid) {
  const ComplexSpectrum band = normalize(sample_band_shape(shape, grid));
  const ComplexSpectrum transmission = transmission_spectrum(stack, grid);
  std::vector<Complex> values(band.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = transmission.values()[i] * band.values()[i];
  return {ComplexSpectrum(std::vector<double>(grid.begin(), grid.end()),
                          std::move(values))};
}

/// The band shape is tabulated over 12 sinc zeros on either side of its
/// center.
inline constexpr double window_zero_count = 12.0;

/// Integration window in omega, symmetric about Omega / 2 so that omega and
/// Omega - omega are both grid points. It covers the band shape out to
/// window_zero_count * pi / t0 and stays strictly inside (0, Omega).
struct FrequencyWindow {
  double center = 0.0;      // Omega / 2
  double half_width = 0.0;  // rad/s

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
  double width() const noexcept { return 2.0 * half_width; }

  /// Detunings x_i from `center`; exactly mirror symmetric.
  std::vector<double> detunings(std::size_t n) const {
    return linspace(-half_width, half_width, n);
  }

  /// Absolute frequencies center + x_i.
  std::vector<double> frequencies(std::size_t n) const {
    std::vector<double> grid = detunings(n);
    for (double& x : grid) x += center;
    return grid;
  }
};

inline FrequencyWindow packet_window(const BandShape& shape, const Pump& pump) {
  validate(shape);
  validate(pump);
  const double half_pump = 0.5 * pump.frequency;
  const double reach = std::abs(shape.center - half_pump) +
                       window_zero_count * std::numbers::pi / shape.half_duration;
  // Inset keeps omega = 0 and omega = Omega off the grid.
  const double limit = half_pump * (1.0 - 1e-9);
  return {half_pump, std::min(reach, limit)};
}

}  // namespace fourthorder
