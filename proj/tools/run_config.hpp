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

#ifndef SCENE_PLACER_TOOLS_RUN_CONFIG_HPP_
#define SCENE_PLACER_TOOLS_RUN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scene_placer/model.hpp"
#include "scene_placer/sampler.hpp"

namespace scene_placer::cli {

/// Every tunable of a batch run. Loaded from a flat JSON file whose keys
/// are the field names below; command-line flags override the file.
struct RunConfig {
  /// Label values treated as drivable space (Cityscapes train ids for
  /// road, sidewalk and terrain by default).
  std::vector<int> drivable_classes{0, 1, 9};
  std::vector<int> augmentable_classes;
  double tau = 5.0;
  std::size_t n_objects = 12;
  double show_prob = 0.5;
  std::size_t n_bins = 50;
  double window = 2.0;
  double stride = 1.0;
  std::size_t min_samples = 30;
  std::size_t min_window_count = 10;
  double min_visible_frac = 0.25;
  int max_attempts = 25;
  double min_visible = 0.2;
  double depth_scale = 1.0 / 256.0;
  std::string prior = "uniform";
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  FitConfig fit_config() const;
  SamplerParams sampler_params() const;
};

/// Overrides fields present in `json_text`. Unknown keys and bad types
/// throw kSchemaError.
void apply_config_json(RunConfig &config, std::string_view json_text);

}  // namespace scene_placer::cli

#endif  // SCENE_PLACER_TOOLS_RUN_CONFIG_HPP_
