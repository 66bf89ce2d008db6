// Copyright 2026 The Scene Placer Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCENE_PLACER_DISTRIBUTIONS_HPP_
#define SCENE_PLACER_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace scene_placer {

/// Parameters of ln(X) ~ N(mu, sigma^2).
struct LogNormalParams {
  double mu = 0;
  double sigma = 0;

  friend bool operator==(const LogNormalParams &,
                         const LogNormalParams &) = default;
};

/// y(x) = a + b * x^c, fitted on x in [domain_lo, domain_hi].
struct PowerCurve {
  double a = 0;
  double b = 0;
  double c = 1;
  double domain_lo = 0;
  double domain_hi = 0;

  double operator()(double x) const noexcept;
  /// Evaluates at x clamped into the fitted domain.
  double clamped(double x) const noexcept;
  /// Flat curve y == value over the given domain.
  static PowerCurve constant(double value, double lo, double hi) noexcept {
    return {value, 0.0, 1.0, lo, hi};
  }

  friend bool operator==(const PowerCurve &, const PowerCurve &) = default;
};

/// Normalized histogram over strictly increasing edges.
struct Histogram {
  std::vector<double> edges;  // n + 1
  std::vector<double> probs;  // n

  std::size_t bins() const noexcept { return probs.size(); }
  /// Bin holding x; values outside the edges clamp to the first/last bin,
  /// and the upper edge belongs to the last bin.
  std::size_t bin_index(double x) const noexcept;

  friend bool operator==(const Histogram &, const Histogram &) = default;
};

/// Log-height statistics of one depth window.
struct ProfilePoint {
  double d_center = 0;
  double mu_log_h = 0;
  double sigma_log_h = 0;
  std::size_t count = 0;
};

struct DepthHeight {
  double d = 0;
  double h = 0;
};

struct CurvePoint {
  double x = 0;
  double y = 0;
};

/// Maximum-likelihood log-normal: mean and population standard deviation
/// of ln(samples). Throws kInsufficientData below two samples and
/// kInvalidSample on any non-positive value.
LogNormalParams fit_lognormal(std::span<const double> samples);

/// Windowed log-height statistics. Window centers run from the smallest
/// observed depth to the largest in steps of `stride`; each window takes
/// objects with |d - center| <= window / 2. Windows holding fewer than
/// `min_count` objects are left out.
std::vector<ProfilePoint> depth_height_profile(
    std::span<const DepthHeight> objects, double window, double stride,
    std::size_t min_count);

/// Least-squares fit of y = a + b * x^c. The exponent is searched over
/// [0.05, 4.0] in steps of 0.005 with (a, b) solved in closed form at each
/// step; the smallest exponent wins ties. Needs >= 3 points with x > 0.
PowerCurve fit_power_curve(std::span<const CurvePoint> points);

/// Sum of squared residuals of `curve` over `points` (no clamping).
double sum_squared_error(const PowerCurve &curve,
                         std::span<const CurvePoint> points) noexcept;

/// Uniform-width histogram over [min, max] of `ratios`, normalized to 1.
/// A zero-width span is widened by 1e-6.
Histogram build_aspect_histogram(std::span<const double> ratios,
                                 std::size_t n_bins);

}  // namespace scene_placer

#endif  // SCENE_PLACER_DISTRIBUTIONS_HPP_
