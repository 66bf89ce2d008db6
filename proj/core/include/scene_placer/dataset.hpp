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

#ifndef SCENE_PLACER_DATASET_HPP_
#define SCENE_PLACER_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "scene_placer/geometry.hpp"

namespace scene_placer {

struct Category {
  int id = 0;
  std::string name;

  friend bool operator==(const Category &, const Category &) = default;
};

struct Annotation {
  std::int64_t id = 0;
  int class_id = 0;
  BBox box;
  std::string mask_path;  // empty when absent

  friend bool operator==(const Annotation &, const Annotation &) = default;
};

/// One image with its ground-truth objects and the paths of its depth and
/// semantic rasters (empty when not provided).
struct AnnotatedFrame {
  std::int64_t frame_id = 0;
  std::string file_name;
  std::string camera_id = "default";
  int width = 0;
  int height = 0;
  std::vector<Annotation> annotations;
  std::string depth_path;
  std::string semantic_path;

  bool has_grids() const noexcept {
    return !depth_path.empty() && !semantic_path.empty();
  }

  friend bool operator==(const AnnotatedFrame &,
                         const AnnotatedFrame &) = default;
};

struct Dataset {
  std::vector<Category> categories;
  std::vector<AnnotatedFrame> frames;

  friend bool operator==(const Dataset &, const Dataset &) = default;
};

}  // namespace scene_placer

#endif  // SCENE_PLACER_DATASET_HPP_
