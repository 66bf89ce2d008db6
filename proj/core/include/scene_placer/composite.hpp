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

#ifndef SCENE_PLACER_COMPOSITE_HPP_
#define SCENE_PLACER_COMPOSITE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scene_placer/geometry.hpp"

namespace scene_placer {

/// Binary object mask in crop-local pixels. The mask may have any
/// resolution (e.g. the 512x512 generator output); it covers `patch` in
/// the frame.
struct InstanceMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;
  PatchRect patch;

  bool at(int x, int y) const noexcept {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const noexcept;
};

/// Binary mask in frame pixels, stored over its bounding rectangle.
struct PlacedMask {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool contains(int fx, int fy) const noexcept {
    const int x = fx - x0;
    const int y = fy - y0;
    return x >= 0 && y >= 0 && x < width && y < height &&
           bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const noexcept;

  friend bool operator==(const PlacedMask &, const PlacedMask &) = default;
};

struct CompositePlan {
  /// Paste order (farthest first); indices into the input masks.
  std::vector<std::size_t> order;
  /// Pixels each input still shows after nearer masks overwrite it.
  std::vector<PlacedMask> visible;
  /// visible pixels / mask pixels, 0 for an empty mask.
  std::vector<double> visible_frac;
};

struct VisibilityResult {
  /// Surviving input indices, ascending.
  std::vector<std::size_t> kept;
  /// Plan over the survivors; dropped entries have empty masks.
  CompositePlan plan;
};

/// Tight box around the set bits, in frame coordinates. Throws kEmptyMask.
BBox refine_bbox(const InstanceMask &mask);

/// Nearest-neighbour resample of the mask onto the frame grid, clipped to
/// the frame.
PlacedMask rasterize(const InstanceMask &mask, int frame_w, int frame_h);

/// Ascending disparity (farthest first); equal depths keep input order.
std::vector<std::size_t> composite_order(std::span<const double> depths);

/// Pastes masks in `order`, later ones overwriting earlier ones.
/// Throws kInvalidArgument if `order` is not a permutation.
CompositePlan composite_masks(std::span<const PlacedMask> masks,
                              std::span<const std::size_t> order);

/// Drops masks showing less than `min_visible` of their pixels. Masks are
/// decided nearest first against the survivors in front of them, so a
/// dropped occluder never hides anything behind it.
VisibilityResult visibility_filter(std::span<const PlacedMask> masks,
                                   std::span<const std::size_t> order,
                                   double min_visible);

}  // namespace scene_placer

#endif  // SCENE_PLACER_COMPOSITE_HPP_
