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

#include "scene_placer/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "scene_placer/error.hpp"

namespace scene_placer {

namespace {

void check_dims(int width, int height, std::size_t n, const char *what) {
  if (width < 0 || height < 0 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != n) {
    throw Error(ErrorCode::kInvalidGrid,
                std::string(what) + ": " + std::to_string(width) + "x" +
                    std::to_string(height) + " does not hold " +
                    std::to_string(n) + " values");
  }
}

void check_same_shape(const DepthGrid &depth, const DrivableMask &mask) {
  if (depth.width() != mask.width() || depth.height() != mask.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "depth grid " + std::to_string(depth.width()) + "x" +
                    std::to_string(depth.height()) + " vs drivable mask " +
                    std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()));
  }
}

}  // namespace

DepthGrid::DepthGrid(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width_, height_, values_.size(), "depth grid");
  for (float v : values_) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw Error(ErrorCode::kInvalidGrid,
                  "depth values must be finite and non-negative");
    }
  }
}

LabelGrid::LabelGrid(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width_, height_, labels_.size(), "label grid");
}

DrivableMask::DrivableMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width_, height_, bits_.size(), "drivable mask");
  for (auto &b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t DrivableMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

DrivableMask drivable_mask(const LabelGrid &labels,
                           std::span<const int> drivable_classes) {
  if (drivable_classes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "drivable class set is empty");
  }
  std::array<std::uint8_t, 256> lut{};
  for (int c : drivable_classes) {
    if (c >= 0 && c < 256) lut[static_cast<std::size_t>(c)] = 1;
  }
  std::vector<std::uint8_t> bits(labels.size());
  auto src = labels.labels();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = lut[src[i]];
  return DrivableMask(labels.width(), labels.height(), std::move(bits));
}

PixelSet placement_band(const DepthGrid &depth, const DrivableMask &mask,
                        double d, double tau) {
  check_same_shape(depth, mask);
  if (!(tau > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "band threshold must be > 0");
  }
  PixelSet band;
  const int w = depth.width();
  const auto values = depth.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask.test(i) && std::abs(static_cast<double>(values[i]) - d) <= tau) {
      band.push_back({static_cast<int>(i % w), static_cast<int>(i / w)});
    }
  }
  return band;
}

double closest_allowed_depth(const DepthGrid &depth, const DrivableMask &mask,
                             double d) {
  check_same_shape(depth, mask);
  const auto values = depth.values();
  double best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.test(i)) continue;
    const double v = values[i];
    const double dist = std::abs(v - d);
    if (!found || dist < best_dist) {
      best = v;
      best_dist = dist;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kEmptyDrivableSpace, "no drivable pixels in scene");
  }
  return best;
}

PatchRect crop_geometry(const BBox &box, int frame_w, int frame_h) {
  if (!box.valid() || !std::isfinite(box.cx) || !std::isfinite(box.by)) {
    throw Error(ErrorCode::kInvalidBox, "box width and height must be > 0");
  }
  if (frame_w <= 0 || frame_h <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be > 0");
  }
  if (box.right() <= 0 || box.left() >= frame_w || box.bottom() <= 0 ||
      box.top() >= frame_h) {
    throw Error(ErrorCode::kInvalidBox, "box does not intersect the frame");
  }
  const double m = 2.0 * std::max(box.w, box.h);
  const int limit = std::min(frame_w, frame_h);
  const int side = static_cast<int>(
      std::clamp(std::llround(m), 1LL, static_cast<long long>(limit)));
  const double center_y = box.by - 0.5 * box.h;
  auto x0 = static_cast<int>(std::floor(box.cx - 0.5 * side + 0.5));
  auto y0 = static_cast<int>(std::floor(center_y - 0.5 * side + 0.5));
  x0 = std::clamp(x0, 0, frame_w - side);
  y0 = std::clamp(y0, 0, frame_h - side);
  return {x0, y0, side};
}

std::array<double, 2> anchor_point(Pixel p, GridScale scale) noexcept {
  return {(p.x + 0.5) * scale.sx, (p.y + 1.0) * scale.sy};
}

Pixel anchor_pixel(double cx, double by, GridScale scale, int grid_w,
                   int grid_h) noexcept {
  const double gx = std::floor(cx / scale.sx);
  const double gy = std::ceil(by / scale.sy) - 1.0;
  return {static_cast<int>(std::clamp(gx, 0.0, grid_w - 1.0)),
          static_cast<int>(std::clamp(gy, 0.0, grid_h - 1.0))};
}

double object_depth(const DepthGrid &depth, const BBox &box, GridScale scale) {
  if (depth.size() == 0) {
    throw Error(ErrorCode::kInvalidGrid, "empty depth grid");
  }
  const Pixel c =
      anchor_pixel(box.cx, box.by, scale, depth.width(), depth.height());
  std::array<float, 9> window{};
  std::size_t n = 0;
  for (int y = c.y - 1; y <= c.y + 1; ++y) {
    if (y < 0 || y >= depth.height()) continue;
    for (int x = c.x - 1; x <= c.x + 1; ++x) {
      if (x < 0 || x >= depth.width()) continue;
      window[n++] = depth.at(x, y);
    }
  }
  std::sort(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(n));
  if (n % 2 == 1) return window[n / 2];
  return 0.5 * (static_cast<double>(window[n / 2 - 1]) + window[n / 2]);
}

std::optional<BBox> clip_to_frame(const BBox &box, int frame_w,
                                  int frame_h) noexcept {
  const double l = std::max(box.left(), 0.0);
  const double r = std::min(box.right(), static_cast<double>(frame_w));
  const double t = std::max(box.top(), 0.0);
  const double b = std::min(box.bottom(), static_cast<double>(frame_h));
  if (r <= l || b <= t) return std::nullopt;
  return BBox{0.5 * (l + r), b, r - l, b - t};
}

double visible_fraction(const BBox &box, int frame_w, int frame_h) noexcept {
  if (!box.valid()) return 0.0;
  const auto clipped = clip_to_frame(box, frame_w, frame_h);
  if (!clipped) return 0.0;
  return std::min(1.0, clipped->area() / box.area());
}

}  // namespace scene_placer
