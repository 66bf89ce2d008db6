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

#include "scene_placer/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scene_placer/error.hpp"

namespace scene_placer {

namespace {

struct LogStats {
  double mean = 0;
  double stddev = 0;
};

// Two-pass mean and population standard deviation. Offsets are taken
// from the first value so constant input yields exactly zero spread.
template <typename It>
LogStats log_stats(It first, It last) {
  const auto n = static_cast<double>(std::distance(first, last));
  const double pivot = *first;
  double sum = 0;
  for (auto it = first; it != last; ++it) sum += *it - pivot;
  const double mean = pivot + sum / n;
  double ss = 0;
  for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
  return {mean, std::sqrt(ss / n)};
}

constexpr int kExponentSteps = 791;  // 0.05, 0.055, ..., 4.0

double grid_exponent(int k) { return (50.0 + 5.0 * k) / 1000.0; }

}  // namespace

double PowerCurve::operator()(double x) const noexcept {
  if (b == 0.0) return a;
  return a + b * std::pow(x, c);
}

double PowerCurve::clamped(double x) const noexcept {
  return (*this)(std::clamp(x, domain_lo, std::max(domain_lo, domain_hi)));
}

std::size_t Histogram::bin_index(double x) const noexcept {
  if (probs.empty()) return 0;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  const auto pos = std::distance(edges.begin(), it) - 1;
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(pos, 0, static_cast<std::ptrdiff_t>(bins()) - 1));
}

LogNormalParams fit_lognormal(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "log-normal fit needs at least 2 samples, got " +
                    std::to_string(samples.size()));
  }
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (double s : samples) {
    if (!(s > 0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidSample,
                  "log-normal samples must be finite and > 0, got " +
                      std::to_string(s));
    }
    logs.push_back(std::log(s));
  }
  const auto stats = log_stats(logs.begin(), logs.end());
  return {stats.mean, stats.stddev};
}

std::vector<ProfilePoint> depth_height_profile(
    std::span<const DepthHeight> objects, double window, double stride,
    std::size_t min_count) {
  if (objects.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no objects for height profile");
  }
  if (!(window > 0) || !(stride > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile window and stride must be > 0");
  }
  std::vector<DepthHeight> sorted(objects.begin(), objects.end());
  for (const auto &o : sorted) {
    if (!(o.h > 0) || !std::isfinite(o.h) || !std::isfinite(o.d)) {
      throw Error(ErrorCode::kInvalidSample,
                  "object heights must be finite and > 0");
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) {
    return a.d < b.d || (a.d == b.d && a.h < b.h);
  });
  std::vector<double> depths(sorted.size());
  std::vector<double> log_h(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    depths[i] = sorted[i].d;
    log_h[i] = std::log(sorted[i].h);
  }

  const double lo = depths.front();
  const double hi = depths.back();
  const double half = 0.5 * window;
  const auto n_centers =
      static_cast<std::size_t>(std::floor((hi - lo) / stride + 1e-9)) + 1;

  std::vector<ProfilePoint> profile;
  for (std::size_t k = 0; k < n_centers; ++k) {
    const double center = lo + static_cast<double>(k) * stride;
    const auto first = std::partition_point(
        depths.begin(), depths.end(),
        [&](double d) { return center - d > half; });
    const auto last = std::partition_point(
        first, depths.end(), [&](double d) { return d - center <= half; });
    const auto count = static_cast<std::size_t>(std::distance(first, last));
    if (count == 0 || count < min_count) continue;
    const auto offset = std::distance(depths.begin(), first);
    const auto stats = log_stats(log_h.begin() + offset,
                                 log_h.begin() + offset +
                                     static_cast<std::ptrdiff_t>(count));
    profile.push_back({center, stats.mean, stats.stddev, count});
  }
  return profile;
}

PowerCurve fit_power_curve(std::span<const CurvePoint> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kInsufficientData,
                "power curve fit needs at least 3 points, got " +
                    std::to_string(points.size()));
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum_y = 0;
  double sum_y2 = 0;
  for (const auto &p : points) {
    if (!(p.x > 0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvalidSample,
                  "power curve abscissae must be finite and > 0");
    }
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
    sum_y += p.y;
    sum_y2 += p.y * p.y;
  }
  const auto n = static_cast<double>(points.size());
  const double mean_y = sum_y / n;
  // Improvements smaller than this are rounding noise; keeping the earlier
  // (smaller) exponent makes flat data resolve to the first grid point.
  const double tie_tolerance = 1e-12 * (sum_y2 + 1.0);

  std::vector<double> u(points.size());
  PowerCurve best;
  double best_sse = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int k = 0; k < kExponentSteps; ++k) {
    const double c = grid_exponent(k);
    double sum_u = 0;
    double sum_u2 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      u[i] = std::pow(points[i].x, c);
      sum_u += u[i];
      sum_u2 += u[i] * u[i];
    }
    const double mean_u = sum_u / n;
    double suu = 0;
    double suy = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      suu += (u[i] - mean_u) * (u[i] - mean_u);
      suy += (u[i] - mean_u) * (points[i].y - mean_y);
    }
    if (!(suu > 1e-14 * sum_u2) || !std::isfinite(suu)) continue;
    const double b = suy / suu;
    const double a = mean_y - b * mean_u;
    double sse = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double r = points[i].y - a - b * u[i];
      sse += r * r;
    }
    if (!found || sse < best_sse - tie_tolerance) {
      best = {a, b, c, lo, hi};
      best_sse = sse;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kDegenerateFit,
                "power curve abscissae do not vary; linear system is singular");
  }
  return best;
}

double sum_squared_error(const PowerCurve &curve,
                         std::span<const CurvePoint> points) noexcept {
  double sse = 0;
  for (const auto &p : points) {
    const double r = p.y - curve(p.x);
    sse += r * r;
  }
  return sse;
}

Histogram build_aspect_histogram(std::span<const double> ratios,
                                 std::size_t n_bins) {
  if (ratios.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no aspect ratios");
  }
  if (n_bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double r : ratios) {
    if (!(r > 0) || !std::isfinite(r)) {
      throw Error(ErrorCode::kInvalidSample,
                  "aspect ratios must be finite and > 0");
    }
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi - lo < 1e-6) hi = lo + 1e-6;

  Histogram hist;
  hist.edges.resize(n_bins + 1);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    hist.edges[i] = lo + static_cast<double>(i) * width;
  }
  hist.edges[n_bins] = hi;
  hist.probs.assign(n_bins, 0.0);

  std::vector<std::size_t> counts(n_bins, 0);
  for (double r : ratios) ++counts[hist.bin_index(r)];
  const auto total = static_cast<double>(ratios.size());
  for (std::size_t i = 0; i < n_bins; ++i) {
    hist.probs[i] = static_cast<double>(counts[i]) / total;
  }
  return hist;
}

}  // namespace scene_placer
