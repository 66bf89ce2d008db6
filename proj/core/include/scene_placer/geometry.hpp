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

#ifndef SCENE_PLACER_GEOMETRY_HPP_
#define SCENE_PLACER_GEOMETRY_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scene_placer {

/// Per-pixel relative disparity (higher = nearer the camera), row-major.
class DepthGrid {
 public:
  DepthGrid() = default;
  /// Throws kInvalidGrid if the size does not match or a value is negative
  /// or non-finite.
  DepthGrid(int width, int height, std::vector<float> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  float at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const DepthGrid &, const DepthGrid &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

/// Per-pixel semantic class index, row-major.
class LabelGrid {
 public:
  LabelGrid() = default;
  LabelGrid(int width, int height, std::vector<std::uint8_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::uint8_t at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  friend bool operator==(const LabelGrid &, const LabelGrid &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

class DrivableMask {
 public:
  DrivableMask() = default;
  /// bits holds 0/1 per pixel, row-major.
  DrivableMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool at(int x, int y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  bool test(std::size_t index) const noexcept { return bits_[index] != 0; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count() const noexcept;

  friend bool operator==(const DrivableMask &, const DrivableMask &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Axis-aligned box anchored at its bottom-center, continuous frame pixels.
struct BBox {
  double cx = 0;  // horizontal center
  double by = 0;  // bottom edge
  double w = 0;
  double h = 0;

  double left() const noexcept { return cx - 0.5 * w; }
  double right() const noexcept { return cx + 0.5 * w; }
  double top() const noexcept { return by - h; }
  double bottom() const noexcept { return by; }
  double area() const noexcept { return w * h; }
  bool valid() const noexcept { return w > 0 && h > 0; }

  /// From COCO corner form [x, y, w, h].
  static BBox from_corner(double x, double y, double w, double h) noexcept {
    return {x + 0.5 * w, y + h, w, h};
  }
  std::array<double, 4> to_corner() const noexcept {
    return {cx - 0.5 * w, by - h, w, h};
  }

  friend bool operator==(const BBox &, const BBox &) = default;
};

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel &, const Pixel &) = default;
  /// Row-major ordering.
  friend auto operator<=>(const Pixel &a, const Pixel &b) noexcept {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Pixels in canonical row-major order without duplicates.
using PixelSet = std::vector<Pixel>;

/// Square crop in frame pixels.
struct PatchRect {
  int x0 = 0;
  int y0 = 0;
  int side = 1;

  friend bool operator==(const PatchRect &, const PatchRect &) = default;
};

/// Maps grid pixels to frame pixels when the rasters are stored at a
/// different resolution than the frame. Both factors are frame/grid.
struct GridScale {
  double sx = 1.0;
  double sy = 1.0;

  static GridScale between(int grid_w, int grid_h, int frame_w,
                           int frame_h) noexcept {
    return {static_cast<double>(frame_w) / grid_w,
            static_cast<double>(frame_h) / grid_h};
  }
};

/// Bits set exactly where the label is in `drivable_classes`.
/// Throws kInvalidArgument on an empty class set.
DrivableMask drivable_mask(const LabelGrid &labels,
                           std::span<const int> drivable_classes);

/// Drivable pixels whose depth lies within `tau` of `d`, row-major.
PixelSet placement_band(const DepthGrid &depth, const DrivableMask &mask,
                        double d, double tau);

/// Depth of the drivable pixel nearest to `d` in value; the first such
/// pixel in row-major order wins ties. Throws kEmptyDrivableSpace.
double closest_allowed_depth(const DepthGrid &depth, const DrivableMask &mask,
                             double d);

/// Square inpainting crop of side round(2 * max(w, h)) centered on the box.
/// Crops that overrun the frame are shifted inside; a side larger than the
/// smaller frame dimension is clipped to it.
PatchRect crop_geometry(const BBox &box, int frame_w, int frame_h);

/// Bottom-center frame coordinates for a grid pixel: the horizontal pixel
/// center and the lower pixel edge.
std::array<double, 2> anchor_point(Pixel p, GridScale scale) noexcept;

/// Grid pixel holding a bottom-center anchor, clamped into the grid.
/// Inverse of anchor_point.
Pixel anchor_pixel(double cx, double by, GridScale scale, int grid_w,
                   int grid_h) noexcept;

/// Median of the 3x3 depth neighborhood (clipped at the border) around the
/// box's bottom-center pixel. Even counts average the two middle values.
double object_depth(const DepthGrid &depth, const BBox &box,
                    GridScale scale);

/// Fraction of the box area inside [0, frame_w] x [0, frame_h].
double visible_fraction(const BBox &box, int frame_w, int frame_h) noexcept;

/// Intersection with the frame, or nullopt when empty.
std::optional<BBox> clip_to_frame(const BBox &box, int frame_w,
                                  int frame_h) noexcept;

}  // namespace scene_placer

#endif  // SCENE_PLACER_GEOMETRY_HPP_
