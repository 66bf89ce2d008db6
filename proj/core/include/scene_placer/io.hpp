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

#ifndef SCENE_PLACER_IO_HPP_
#define SCENE_PLACER_IO_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scene_placer/composite.hpp"
#include "scene_placer/dataset.hpp"
#include "scene_placer/geometry.hpp"
#include "scene_placer/model.hpp"
#include "scene_placer/sampler.hpp"

namespace scene_placer {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr double kDefaultDepthScale = 1.0 / 256.0;

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path &path);

/// Writes via a sibling temporary file and rename, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view bytes);

// ---------------------------------------------------------------------------
// COCO-style annotations
//
// Reads images[] (id, width, height, optional file_name, camera, depth_path,
// semantic_path), annotations[] (id, image_id, category_id, bbox [x,y,w,h],
// optional mask) and categories[] (id, name). Other keys are ignored.

Dataset parse_annotations(std::string_view json_text);
Dataset read_annotations(const std::filesystem::path &path);
/// Canonical form: frames by id, annotations by id, fixed key order.
std::string annotations_to_json(const Dataset &dataset);
void write_annotations(const Dataset &dataset,
                       const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// Binary PGM rasters

/// 16-bit big-endian P5 (maxval 65535); value = raw * scale.
DepthGrid decode_depth_pgm(std::string_view bytes, double scale);
std::string encode_depth_pgm(const DepthGrid &grid, double scale);
DepthGrid read_depth_grid(const std::filesystem::path &path, double scale);
void write_depth_grid(const DepthGrid &grid, const std::filesystem::path &path,
                      double scale);

/// 8-bit P5 (maxval 255).
LabelGrid decode_label_pgm(std::string_view bytes);
std::string encode_label_pgm(const LabelGrid &grid);
LabelGrid read_label_grid(const std::filesystem::path &path);
void write_label_grid(const LabelGrid &grid, const std::filesystem::path &path);

/// 8-bit P5 mask, 0 = background and 255 = object. Values >= 128 count as
/// object. The patch of the returned mask is left default.
InstanceMask read_mask(const std::filesystem::path &path);
void write_mask(const InstanceMask &mask, const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// Location model JSON (schema 1)

std::string model_to_json(const LocationModel &model);
/// Throws kVersionError on a missing or unsupported schema, kSchemaError
/// on missing or mistyped fields.
LocationModel model_from_json(std::string_view json_text);
void save_model(const LocationModel &model, const std::filesystem::path &path);
LocationModel load_model(const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// Augmented layouts

struct AugmentedLayout {
  std::int64_t frame_id = 0;
  std::vector<PlacementProposal> proposals;
  std::size_t dropped = 0;
};

std::string layout_to_json(const AugmentedLayout &layout);
AugmentedLayout layout_from_json(std::string_view json_text);
void save_layout(const AugmentedLayout &layout,
                 const std::filesystem::path &path);
AugmentedLayout load_layout(const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// Overlay rendering

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::array<std::uint8_t, 3> at(int x, int y) const noexcept {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

inline constexpr std::array<std::uint8_t, 3> kOverlayBackground{128, 128, 128};
inline constexpr std::array<std::uint8_t, 3> kOverlayReal{0, 0, 255};
inline constexpr std::array<std::uint8_t, 3> kOverlayProposal{0, 255, 0};

/// Gray canvas with 2-px box outlines: ground truth in blue, proposals in
/// green (drawn last).
RgbImage render_overlay(int frame_w, int frame_h,
                        std::span<const BBox> real_boxes,
                        std::span<const BBox> proposal_boxes);
std::string encode_ppm(const RgbImage &image);
void write_ppm(const RgbImage &image, const std::filesystem::path &path);

}  // namespace scene_placer

#endif  // SCENE_PLACER_IO_HPP_
