#pragma once

// Fixed-grid composite Simpson quadrature with grid-doubling refinement.
//
// All routines are deterministic: identical inputs give bitwise-identical
// results. Grids are uniform; refinement doubles the number of intervals so
// every coarse grid is a subset of the next finer one.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fourthorder/errors.hpp"

namespace fourthorder {

using Complex = std::complex<double>;

struct QuadratureResult {
  Complex value;
  double estimated_error = 0.0;
  std::size_t n_points_used = 0;
};

/// `n` uniformly spaced points covering [lower, upper] inclusive.
///
/// When lower == -upper the grid is exactly mirror symmetric in floating
/// point (grid[n-1-i] == -grid[i]), which the interference kernels rely on.
inline std::vector<double> linspace(double lower, double upper, std::size_t n) {
  if (n < 2) throw DomainError("linspace: need at least two points");
  if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper))
    throw DomainError("linspace: need finite lower < upper");
  std::vector<double> grid(n);
  const double span = upper - lower;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = lower + span * (static_cast<double>(i) / last);
  grid.front() = lower;
  grid.back() = upper;
  if (lower == -upper) {
    for (std::size_t i = 0; i < n / 2; ++i) grid[n - 1 - i] = -grid[i];
    if (n % 2 == 1) grid[n / 2] = 0.0;
  }
  return grid;
}

namespace detail {

inline Complex simpson_sum(std::span<const Complex> f, std::size_t stride,
                           double step, double* l1 = nullptr) {
  const std::size_t n = (f.size() - 1) / stride + 1;
  Complex odd{0.0, 0.0};
  Complex even{0.0, 0.0};
  double abs_sum = std::abs(f[0]) + std::abs(f[(n - 1) * stride]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Complex v = f[k * stride];
    if (k % 2 == 1) {
      odd += v;
      abs_sum += 4.0 * std::abs(v);
    } else {
      even += v;
      abs_sum += 2.0 * std::abs(v);
    }
  }
  if (l1 != nullptr) *l1 = abs_sum * step / 3.0;
  return (f[0] + 4.0 * odd + 2.0 * even + f[(n - 1) * stride]) * (step / 3.0);
}

inline Complex trapezoid_sum(std::span<const Complex> f, double step) {
  Complex inner{0.0, 0.0};
  for (std::size_t k = 1; k + 1 < f.size(); ++k) inner += f[k];
  return (0.5 * (f.front() + f.back()) + inner) * step;
}

}  // namespace detail

/// Composite Simpson rule over uniformly spaced samples.
///
/// The error estimate is the Richardson difference against the
/// half-resolution Simpson value when (n - 1) is divisible by 4, otherwise
/// the difference against the trapezoid value; it never drops below a
/// round-off floor proportional to the integral of |f|.
inline QuadratureResult integrate(std::span<const Complex> samples,
                                  double step) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0)
    throw DomainError("integrate: Simpson needs an odd number >= 3 of samples, got " +
                      std::to_string(n));
  if (!(step > 0.0) || !std::isfinite(step))
    throw DomainError("integrate: step must be positive and finite");

  double l1 = 0.0;
  const Complex value = detail::simpson_sum(samples, 1, step, &l1);
  double estimate = 0.0;
  if ((n - 1) % 4 == 0) {
    const Complex coarse = detail::simpson_sum(samples, 2, 2.0 * step);
    estimate = std::abs(value - coarse) / 15.0;
  } else {
    estimate = std::abs(value - detail::trapezoid_sum(samples, step));
  }
  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() *
                          std::sqrt(static_cast<double>(n)) * l1;
  return {value, std::max(estimate, roundoff), n};
}

struct RefineOptions {
  std::size_t initial_points = 129;
  double target_rel_error = 1e-7;
  int max_doublings = 12;
  /// Successive values must agree to target_rel_error * max(|value|, scale).
  /// A positive scale turns the test into an absolute one for integrals that
  /// may legitimately vanish.
  double reference_scale = 0.0;
};

/// Doubles the grid until two successive Simpson values agree.
///
/// `sample(n)` returns the integrand on `n` uniform points spanning
/// [lower, upper]. Grids are 2^k (initial_points - 1) + 1 points long.
template <class Sampler>
  requires std::invocable<Sampler&, std::size_t>
QuadratureResult refine_until(Sampler&& sample, double lower, double upper,
                              const RefineOptions& options) {
  if (!(options.target_rel_error > 0.0))
    throw DomainError("refine_until: target_rel_error must be positive");
  if (options.max_doublings < 1 || options.max_doublings > 16)
    throw DomainError("refine_until: max_doublings must lie in [1, 16]");
  if (options.initial_points < 3 || options.initial_points % 2 == 0)
    throw DomainError("refine_until: initial_points must be odd and >= 3");
  if (!(upper > lower)) throw DomainError("refine_until: need lower < upper");

  auto evaluate = [&](std::size_t n) {
    const std::vector<Complex> values = sample(n);
    if (values.size() != n)
      throw DomainError("refine_until: sampler returned " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(n));
    return integrate(values, (upper - lower) / static_cast<double>(n - 1));
  };

  std::size_t n = options.initial_points;
  QuadratureResult previous = evaluate(n);
  Complex before_previous = previous.value;
  for (int doubling = 1; doubling <= options.max_doublings; ++doubling) {
    n = 2 * (n - 1) + 1;
    QuadratureResult current = evaluate(n);
    const double change = std::abs(current.value - previous.value);
    const double scale =
        std::max(std::abs(current.value), options.reference_scale);
    if (change <= options.target_rel_error * scale) {
      current.estimated_error = std::max(change, current.estimated_error);
      return current;
    }
    before_previous = previous.value;
    previous = current;
  }
  throw ConvergenceError("refine_until: no convergence after " +
                             std::to_string(options.max_doublings) +
                             " doublings (last grid " + std::to_string(n) +
                             " points)",
                         before_previous, previous.value);
}

/// Refinement of a pointwise integrand f(x) -> Complex over [lower, upper].
template <class Function>
  requires std::invocable<Function&, double>
QuadratureResult integrate_function(Function&& f, double lower, double upper,
                                    const RefineOptions& options) {
  return refine_until(
      [&](std::size_t n) {
        const std::vector<double> x = linspace(lower, upper, n);
        std::vector<Complex> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = Complex(f(x[i]));
        return values;
      },
      lower, upper, options);
}

/// Intervals needed over `width` so that an oscillation exp(i rate x) gets
/// at least `points_per_period` samples per period.
inline std::size_t intervals_for_rate(double width, double rate,
                                      double points_per_period) {
  const double periods = width * std::abs(rate) / (2.0 * std::numbers::pi);
  return static_cast<std::size_t>(std::ceil(points_per_period * periods));
}

/// Smallest k with base_intervals * 2^k >= required_intervals.
inline int refinement_level(std::size_t required_intervals,
                            std::size_t base_intervals) {
  int level = 0;
  std::size_t intervals = base_intervals;
  while (intervals < required_intervals) {
    intervals *= 2;
    ++level;
  }
  return level;
}

/// Abscissa of the vertex of the parabola through three points.
inline double parabolic_vertex(double xa, double xb, double xc, double fa,
                               double fb, double fc) {
  const double p = (xb - xa) * (fb - fc);
  const double q = (xb - xc) * (fb - fa);
  const double denom = p - q;
  if (denom == 0.0) return xb;
  return xb - 0.5 * ((xb - xa) * p - (xb - xc) * q) / denom;
}

}  // namespace fourthorder
