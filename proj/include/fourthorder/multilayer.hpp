#pragma once

// Lossless 1-D dielectric multilayers at normal incidence.
//
// Each layer is described by its characteristic (Abeles) matrix
//
//   | cos d         -i sin(d) / n |      d = n * omega * thickness / c
//   | -i n sin(d)    cos(d)       |
//
// and the stack matrix is the ordered product, incident side first. Both
// surroundings are vacuum. Fields follow exp(i(kx - omega t)), so a slab
// of vacuum of thickness L transmits with phase exp(+i omega L / c).
//
// The transmission amplitude is the ratio of the transmitted field at the
// exit face to the incident field at the entrance face. Propagation outside
// the stack is not included; that common path phase drops out of every
// normalized coincidence rate and only shifts the absolute dip position of
// asymmetric arrangements.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fourthorder/errors.hpp"
#include "fourthorder/numerics.hpp"

namespace fourthorder {

/// Vacuum speed of light in m/s.
inline constexpr double speed_of_light = 299792458.0;

struct Layer {
  double refractive_index = 1.0;
  double thickness = 0.0;  // meters

  friend bool operator==(const Layer&, const Layer&) = default;
};

inline void validate(const Layer& layer) {
  if (!(layer.refractive_index > 0.0) || !std::isfinite(layer.refractive_index))
    throw DomainError("layer: refractive index must be positive and finite");
  if (!(layer.thickness > 0.0) || !std::isfinite(layer.thickness))
    throw DomainError("layer: thickness must be positive and finite");
}

/// Ordered layers between two vacuum half-spaces. Empty means free space.
class Stack {
 public:
  Stack() = default;

  explicit Stack(std::vector<Layer> layers) : layers_(std::move(layers)) {
    for (const Layer& layer : layers_) validate(layer);
  }

  std::span<const Layer> layers() const noexcept { return layers_; }
  std::size_t size() const noexcept { return layers_.size(); }
  bool empty() const noexcept { return layers_.empty(); }

  /// The same stack seen from the other side.
  Stack reversed() const {
    return Stack(std::vector<Layer>(layers_.rbegin(), layers_.rend()));
  }

  /// Sum of n_j * d_j in meters.
  double optical_thickness() const noexcept {
    double total = 0.0;
    for (const Layer& layer : layers_)
      total += layer.refractive_index * layer.thickness;
    return total;
  }

  friend Stack concatenate(const Stack& first, const Stack& second) {
    std::vector<Layer> joined(first.layers_);
    joined.insert(joined.end(), second.layers_.begin(), second.layers_.end());
    return Stack(std::move(joined));
  }

  friend bool operator==(const Stack&, const Stack&) = default;

 private:
  std::vector<Layer> layers_;
};

/// `n_layers` layers alternating between two indices, starting with `n_high`.
inline Stack alternating_stack(int n_layers, double n_high, double thickness_high,
                               double n_low, double thickness_low) {
  if (n_layers < 1) throw DomainError("stack: layer count must be >= 1");
  std::vector<Layer> layers;
  layers.reserve(static_cast<std::size_t>(n_layers));
  for (int j = 0; j < n_layers; ++j) {
    layers.push_back(j % 2 == 0 ? Layer{n_high, thickness_high}
                                : Layer{n_low, thickness_low});
  }
  return Stack(std::move(layers));
}

/// Quarter-wave Bragg mirror: every layer has optical thickness
/// pi c / (2 omega0), i.e. a quarter wavelength at `center_frequency`.
inline Stack quarter_wave_stack(int n_layers, double n_high, double n_low,
                                double center_frequency) {
  if (n_layers < 1) throw DomainError("quarter_wave_stack: n_layers must be >= 1");
  if (!(n_high > 0.0) || !(n_low > 0.0))
    throw DomainError("quarter_wave_stack: indices must be positive");
  if (!(center_frequency > 0.0) || !std::isfinite(center_frequency))
    throw DomainError("quarter_wave_stack: center frequency must be positive");
  const double quarter = std::numbers::pi * speed_of_light / (2.0 * center_frequency);
  return alternating_stack(n_layers, n_high, quarter / n_high, n_low,
                           quarter / n_low);
}

struct CharacteristicMatrix {
  Complex m11{1.0, 0.0};
  Complex m12{0.0, 0.0};
  Complex m21{0.0, 0.0};
  Complex m22{1.0, 0.0};

  friend CharacteristicMatrix operator*(const CharacteristicMatrix& a,
                                        const CharacteristicMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
};

inline void require_frequency(double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency))
    throw DomainError("frequency must be positive and finite");
}

inline CharacteristicMatrix layer_matrix(const Layer& layer, double frequency) {
  const double n = layer.refractive_index;
  const double phase = n * frequency * layer.thickness / speed_of_light;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {Complex(c, 0.0), Complex(0.0, -s / n), Complex(0.0, -n * s),
          Complex(c, 0.0)};
}

inline CharacteristicMatrix characteristic_matrix(const Stack& stack,
                                                  double frequency) {
  require_frequency(frequency);
  CharacteristicMatrix total;
  for (const Layer& layer : stack.layers())
    total = total * layer_matrix(layer, frequency);
  return total;
}

struct TransferCoefficients {
  Complex transmission;
  Complex reflection;
  double frequency = 0.0;  // rad/s
};

/// Amplitudes for a wave incident from the left, vacuum on both sides.
inline TransferCoefficients coefficients_from_matrix(const CharacteristicMatrix& m,
                                                     double frequency) {
  const Complex denominator = m.m11 + m.m12 + m.m21 + m.m22;
  return {2.0 / denominator, (m.m11 + m.m12 - m.m21 - m.m22) / denominator,
          frequency};
}

inline TransferCoefficients transfer_coefficients(const Stack& stack,
                                                  double frequency) {
  return coefficients_from_matrix(characteristic_matrix(stack, frequency),
                                  frequency);
}

/// Complex samples of a function of angular frequency on a positive,
/// strictly increasing grid.
class ComplexSpectrum {
 public:
  ComplexSpectrum(std::vector<double> frequencies, std::vector<Complex> values)
      : frequencies_(std::move(frequencies)), values_(std::move(values)) {
    if (frequencies_.size() < 2)
      throw DomainError("spectrum: grid needs at least two points");
    if (frequencies_.size() != values_.size())
      throw DomainError("spectrum: " + std::to_string(values_.size()) +
                        " values for " + std::to_string(frequencies_.size()) +
                        " frequencies");
    if (!(frequencies_.front() > 0.0))
      throw DomainError("spectrum: frequencies must be positive");
    for (std::size_t i = 1; i < frequencies_.size(); ++i) {
      if (!(frequencies_[i] > frequencies_[i - 1]))
        throw DomainError("spectrum: frequencies must be strictly increasing");
    }
  }

  std::span<const double> frequencies() const noexcept { return frequencies_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> frequencies_;
  std::vector<Complex> values_;
};

/// T21(omega) of `stack` on every grid point.
inline ComplexSpectrum transmission_spectrum(const Stack& stack,
                                             std::span<const double> grid) {
  std::vector<Complex> values;
  values.reserve(grid.size());
  for (double omega : grid)
    values.push_back(transfer_coefficients(stack, omega).transmission);
  return ComplexSpectrum(std::vector<double>(grid.begin(), grid.end()),
                         std::move(values));
}

}  // namespace fourthorder
