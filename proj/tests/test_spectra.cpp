#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fourthorder/spectra.hpp"

using namespace fourthorder;

namespace {

constexpr double t0 = 20e-15;
constexpr double omega0 = 2.68e15;

}  // namespace

TEST(BandShape, SincValues) {
  const BandShape shape{PulseModel::rect_time, 3.0e15, t0};
  EXPECT_EQ(evaluate_band_shape(shape, 3.0e15), 1.0);
  EXPECT_NEAR(evaluate_band_shape(shape, 3.0e15 + std::numbers::pi / t0), 0.0, 1e-14);
  EXPECT_NEAR(evaluate_band_shape(shape, 3.0e15 + 0.5 / t0), std::sin(0.5) / 0.5, 1e-15);
}

TEST(BandShape, GaussianValue) {
  const BandShape shape{PulseModel::gaussian, 3.0e15, t0};
  EXPECT_NEAR(evaluate_band_shape(shape, 3.0e15 + 1.0 / t0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(evaluate_band_shape(shape, 3.0e15 + 1.0 / t0), 0.6065, 1e-4);
}

TEST(BandShape, ExactlyEvenAboutCenter) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> detuning(0.0, 40.0 / t0);
  for (PulseModel model : {PulseModel::rect_time, PulseModel::gaussian}) {
    const BandShape shape{model, 3.1e15, t0};
    for (int i = 0; i < 500; ++i) {
      const double d = std::round(detuning(rng));
      EXPECT_EQ(evaluate_band_shape(shape, shape.center + d),
                evaluate_band_shape(shape, shape.center - d));
    }
  }
}

TEST(BandShape, FiniteEverywhereAndRejectsNegativeFrequency) {
  const BandShape shape{PulseModel::rect_time, 3.1e15, t0};
  for (double w : {0.0, 1.0, 3.1e15 - 1e-3, 1e17}) EXPECT_TRUE(std::isfinite(evaluate_band_shape(shape, w)));
  EXPECT_THROW(evaluate_band_shape(shape, -1.0), DomainError);
  EXPECT_THROW(validate(BandShape{PulseModel::gaussian, 0.0, t0}), DomainError);
  EXPECT_THROW(validate(BandShape{PulseModel::gaussian, 1e15, -t0}), DomainError);
  EXPECT_THROW(validate(Pump{0.0}), DomainError);
}

TEST(BandShape, SampledValuesAreReal) {
  const BandShape shape{PulseModel::rect_time, 3.1e15, t0};
  const ComplexSpectrum s = sample_band_shape(shape, linspace(2e15, 4e15, 101));
  for (Complex v : s.values()) EXPECT_EQ(v.imag(), 0.0);
}

TEST(Normalize, ConstantBecomesInverseRootWidth) {
  const double width = 3.0e14;
  const std::vector<double> grid = linspace(1e15, 1e15 + width, 33);
  const ComplexSpectrum one(grid, std::vector<Complex>(33, Complex(1.0)));
  const ComplexSpectrum n = normalize(one);
  for (Complex v : n.values()) EXPECT_NEAR(v.real(), 1.0 / std::sqrt(width), 1e-12 / std::sqrt(width));
}

TEST(Normalize, Idempotent) {
  const BandShape shape{PulseModel::rect_time, 3.1e15, t0};
  const ComplexSpectrum once = normalize(sample_band_shape(shape, linspace(2e15, 4e15, 301)));
  const ComplexSpectrum twice = normalize(once);
  for (std::size_t i = 0; i < once.size(); ++i)
    EXPECT_NEAR(std::abs(twice.values()[i] - once.values()[i]), 0.0,
                1e-12 * std::abs(once.values()[0]));
}

TEST(Normalize, GaussianMatchesClosedForm) {
  const BandShape shape{PulseModel::gaussian, 3.1e15, t0};
  const ComplexSpectrum n =
      normalize(sample_band_shape(shape, linspace(3.1e15 - 8.0 / t0, 3.1e15 + 8.0 / t0, 401)));
  // int exp(-x^2 t0^2) dx = sqrt(pi) / t0
  const double peak = std::pow(t0 * t0 / std::numbers::pi, 0.25);
  EXPECT_NEAR(n.values()[200].real() / peak, 1.0, 1e-8);
  EXPECT_NEAR(spectral_power(n), 1.0, 1e-12);
}

TEST(Normalize, AllZeroIsDegenerate) {
  const ComplexSpectrum zero(linspace(1e15, 2e15, 9), std::vector<Complex>(9));
  EXPECT_THROW(normalize(zero), DegenerateError);
}

TEST(Packet, FreeSpaceEqualsNormalizedBand) {
  const BandShape shape{PulseModel::rect_time, 3.1e15, t0};
  const std::vector<double> grid = linspace(2e15, 4e15, 201);
  const EffectivePacket p = effective_packet(shape, Stack{}, grid);
  const ComplexSpectrum f = normalize(sample_band_shape(shape, grid));
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(p.spectrum.values()[i], f.values()[i]);
}

TEST(Packet, GapCenteredSuppressedByFiftySevenLayers) {
  const BandShape shape{PulseModel::rect_time, omega0, t0};
  const std::vector<double> grid = linspace(omega0 - 1e14, omega0 + 1e14, 201);
  const EffectivePacket free = effective_packet(shape, Stack{}, grid);
  const EffectivePacket gap = effective_packet(shape, quarter_wave_stack(57, 2.22, 1.41, omega0), grid);
  EXPECT_GT(std::norm(free.spectrum.values()[100]) / std::norm(gap.spectrum.values()[100]), 1e3);
}

TEST(Packet, EdgeCenteredBridgesTheGapEdge) {
  const std::vector<double> grid =
      linspace(3.06e15 - std::numbers::pi / t0, 3.06e15 + std::numbers::pi / t0, 401);
  const ComplexSpectrum t = transmission_spectrum(quarter_wave_stack(57, 2.22, 1.41, omega0), grid);
  double low = 1.0, high = 0.0;
  for (Complex v : t.values()) {
    low = std::min(low, std::norm(v));
    high = std::max(high, std::norm(v));
  }
  EXPECT_LT(low, 0.01);
  EXPECT_GT(high, 0.5);
}

TEST(Packet, FilteringNeverAmplifies) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> index(1.2, 3.0);
  std::uniform_real_distribution<double> thickness(10e-9, 500e-9);
  const BandShape shape{PulseModel::rect_time, 3.1e15, t0};
  const std::vector<double> grid = linspace(2e15, 4.2e15, 501);
  const ComplexSpectrum f = normalize(sample_band_shape(shape, grid));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Layer> layers(1 + trial * 2);
    for (Layer& l : layers) l = {index(rng), thickness(rng)};
    const EffectivePacket p = effective_packet(shape, Stack(layers), grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      EXPECT_LE(std::abs(p.spectrum.values()[i]), std::abs(f.values()[i]) + 1e-12);
  }
}

TEST(Window, SymmetricAboutHalfPumpAndInsideRange) {
  const Pump pump{6.22e15};
  const FrequencyWindow w = packet_window(degenerate_pulse(PulseModel::rect_time, t0, pump), pump);
  EXPECT_EQ(w.center, 3.11e15);
  EXPECT_NEAR(w.half_width, 12.0 * std::numbers::pi / t0, 1.0);
  const std::vector<double> grid = w.frequencies(129);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(grid[i] + grid[128 - i], pump.frequency, 1e-6 * pump.frequency * 1e-9);

  const FrequencyWindow wide = packet_window(BandShape{PulseModel::rect_time, 3.11e15, 1e-16}, pump);
  EXPECT_GT(wide.lower(), 0.0);
  EXPECT_LT(wide.upper(), pump.frequency);
}
