#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fourthorder/classify.hpp"
#include "oracles.hpp"

using namespace fourthorder;

namespace {

constexpr double t0 = 20e-15;
constexpr double omega0 = 2.68e15;

struct Pair {
  Pump pump;
  BandShape pulse;
  Stack arm_I;
  Stack arm_II;
  EffectivePacket first;
  EffectivePacket second;
};

Pair make_pair(double pump_frequency, PulseModel model, Stack arm_I, Stack arm_II,
               double reach = 60e-6) {
  const Pump pump{pump_frequency};
  const BandShape pulse = degenerate_pulse(model, t0, pump);
  auto [a, b] = indicator_packets(pulse, arm_I, arm_II, pump, reach);
  return {pump, pulse, std::move(arm_I), std::move(arm_II), std::move(a), std::move(b)};
}

Stack bragg57() { return quarter_wave_stack(57, 2.22, 1.41, omega0); }

EffectivePacket scaled(const EffectivePacket& p, double factor) {
  std::vector<Complex> values(p.spectrum.values().begin(), p.spectrum.values().end());
  for (Complex& v : values) v *= factor;
  return {ComplexSpectrum(std::vector<double>(p.spectrum.frequencies().begin(),
                                              p.spectrum.frequencies().end()),
                          std::move(values))};
}

}  // namespace

TEST(Indicator, FreeSpaceGaussianIsNonNegative) {
  const Pair p = make_pair(5.36e15, PulseModel::gaussian, {}, {});
  const double peak = fourier_indicator(p.first, p.second, p.pump, 0.0);
  for (double s : linspace(-60e-6, 60e-6, 121))
    EXPECT_GE(fourier_indicator(p.first, p.second, p.pump, s), -1e-12 * peak) << "s = " << s;
}

TEST(Indicator, ZeroShiftMatchesWeightedOverlap) {
  const Pair p = make_pair(5.36e15, PulseModel::gaussian, {}, {});
  const double f0 = fourier_indicator(p.first, p.second, p.pump, 0.0);
  const auto omega = p.first.spectrum.frequencies();
  const double half = 0.5 * p.pump.frequency;
  const double width = half - omega.front();
  const double scale = std::abs(p.first.spectrum.values()[omega.size() / 2]);
  const double want =
      oracle::romberg(
          [&](double x) {
            const double f = scale * std::exp(-0.5 * x * x * t0 * t0);
            return Complex((half * half - x * x) * f * f * f * f);
          },
          -width, width)
          .real();
  EXPECT_GT(f0, 0.0);
  EXPECT_NEAR(f0 / want, 1.0, 1e-9);
}

TEST(Indicator, EdgeCenteredBarrierGoesNegative) {
  const Pair p = make_pair(6.22e15, PulseModel::rect_time, {}, bragg57());
  const IndicatorScan scan = indicator_scan(p.first, p.second, p.pump, linspace(-60e-6, 60e-6, 241));
  double low = 0.0;
  for (double v : scan.values) low = std::min(low, v);
  EXPECT_LT(low, 0.0);
}

TEST(Indicator, EqualsCorrelatedKernelAtOppositeShift) {
  const Pair p = make_pair(6.22e15, PulseModel::rect_time, {}, bragg57());
  QuadratureSettings settings;
  CoincidenceIntegrals integrals(p.pump, p.pulse, stack_transmission(p.arm_I),
                                 stack_transmission(p.arm_II), settings,
                                 barrier_delay(p.arm_I, p.arm_II));
  const double f_ref = fourier_indicator(p.first, p.second, p.pump, 0.0);
  const double k_ref = integrals.correlated_interference(0.0);
  for (double s : {-30e-6, -12e-6, 5e-6, 20e-6, 45e-6}) {
    const double f = fourier_indicator(p.first, p.second, p.pump, s) / f_ref;
    const double k = integrals.correlated_interference(-s) / k_ref;
    EXPECT_NEAR(f, k, 1e-6) << "s = " << s;
  }
}

TEST(Indicator, ScalingLeavesVerdictUnchanged) {
  const Pair p = make_pair(6.22e15, PulseModel::rect_time, {}, bragg57());
  const EffectivePacket bigger = scaled(p.first, 3.0);
  double peak = 0.0;
  for (double s : {0.0, 10e-6, -25e-6})
    peak = std::max(peak, 9.0 * std::abs(fourier_indicator(p.first, p.second, p.pump, s)));
  for (double s : {0.0, 10e-6, -25e-6}) {
    const double base = fourier_indicator(p.first, p.second, p.pump, s);
    EXPECT_NEAR(fourier_indicator(bigger, p.second, p.pump, s), 9.0 * base, 1e-10 * peak);
  }
  const TypeVerdict a = classify_type(p.first, p.second, p.pump, -60e-6, 60e-6, 121);
  const TypeVerdict b = classify_type(bigger, scaled(p.second, 0.25), p.pump, -60e-6, 60e-6, 121);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.argmin_s, b.argmin_s);
}

TEST(Indicator, RejectsUnsuitableGrids) {
  const Pair p = make_pair(5.36e15, PulseModel::gaussian, {}, {}, 10e-6);
  EXPECT_THROW(fourier_indicator(p.first, p.second, p.pump, 1e-3), DomainError);

  const Pump other{5.0e15};
  EXPECT_THROW(fourier_indicator(p.first, p.second, other, 0.0), DomainError);

  const BandShape pulse = degenerate_pulse(PulseModel::gaussian, t0, p.pump);
  const std::vector<double> lopsided = linspace(2.0e15, 3.0e15, 129);
  const EffectivePacket a = effective_packet(pulse, {}, lopsided);
  EXPECT_THROW(fourier_indicator(a, a, p.pump, 0.0), DomainError);

  const std::vector<double> even = linspace(2.0e15, 3.36e15, 128);
  const EffectivePacket e = effective_packet(pulse, {}, even);
  EXPECT_THROW(fourier_indicator(e, e, p.pump, 0.0), DomainError);

  const std::vector<double> shifted = linspace(2.0e15 + 1e12, 3.36e15 + 1e12, 129);
  const EffectivePacket c = effective_packet(pulse, {}, shifted);
  EXPECT_THROW(fourier_indicator(c, a, p.pump, 0.0), DomainError);
}

TEST(Classify, FreeSpaceGaussianIsTypeA) {
  const Pair p = make_pair(5.36e15, PulseModel::gaussian, {}, {});
  EXPECT_EQ(classify_type(p.first, p.second, p.pump, -60e-6, 60e-6, 241).verdict,
            PacketType::TypeA);
}

TEST(Classify, FreeSpaceSincIsTypeA) {
  const Pair p = make_pair(5.36e15, PulseModel::rect_time, {}, {});
  const TypeVerdict v = classify_type(p.first, p.second, p.pump, -60e-6, 60e-6, 241);
  EXPECT_EQ(v.verdict, PacketType::TypeA);
  EXPECT_GE(v.min_indicator, -1e-6 * v.max_abs_indicator);
}

TEST(Classify, EdgeCenteredFiftySevenLayersIsTypeB) {
  const Pair p = make_pair(6.22e15, PulseModel::rect_time, {}, bragg57());
  const TypeVerdict v = classify_type(p.first, p.second, p.pump, -60e-6, 60e-6, 241);
  EXPECT_EQ(v.verdict, PacketType::TypeB);
  EXPECT_LT(v.min_indicator, 0.0);
  EXPECT_GT(v.max_abs_indicator, 0.0);
}

TEST(Classify, ValidatesArguments) {
  const Pair p = make_pair(5.36e15, PulseModel::gaussian, {}, {});
  EXPECT_THROW(classify_type(p.first, p.second, p.pump, -1e-6, 1e-6, 31), DomainError);
  EXPECT_THROW(classify_type(p.first, p.second, p.pump, -1e-6, 1e-6, 40, 0.0), DomainError);
  const EffectivePacket zero = scaled(p.first, 0.0);
  EXPECT_THROW(classify_type(zero, p.second, p.pump, -1e-6, 1e-6, 40), DegenerateError);
}

TEST(Classify, VerdictToleranceIsRelative) {
  IndicatorScan scan{{-1.0, 0.0, 1.0}, {-1e-7, 1.0, 0.5}};
  EXPECT_EQ(classify_scan(scan, 1e-6).verdict, PacketType::TypeA);
  scan.values[0] = -2e-6;
  const TypeVerdict v = classify_scan(scan, 1e-6);
  EXPECT_EQ(v.verdict, PacketType::TypeB);
  EXPECT_EQ(v.argmin_s, -1.0);
}
