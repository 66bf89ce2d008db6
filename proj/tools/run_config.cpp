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

#include "run_config.hpp"

#include "json.hpp"
#include "scene_placer/error.hpp"

namespace scene_placer::cli {

FitConfig RunConfig::fit_config() const {
  FitConfig c;
  c.tau = tau;
  c.window = window;
  c.stride = stride;
  c.n_bins = n_bins;
  c.min_samples = min_samples;
  c.min_window_count = min_window_count;
  c.drivable_classes = drivable_classes;
  c.augmentable_classes = augmentable_classes;
  c.prior = prior == "frequency" ? PriorMode::kFrequency : PriorMode::kUniform;
  c.jobs = jobs;
  return c;
}

SamplerParams RunConfig::sampler_params() const {
  return {tau, min_visible_frac, max_attempts, show_prob};
}

void apply_config_json(RunConfig &config, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kSchemaError, "config file is not a JSON object");
  }
  for (const auto &[key, value] : doc.items()) {
    try {
      if (key == "drivable_classes") {
        config.drivable_classes = value.get<std::vector<int>>();
      } else if (key == "augmentable_classes") {
        config.augmentable_classes = value.get<std::vector<int>>();
      } else if (key == "tau") {
        config.tau = value.get<double>();
      } else if (key == "n_objects") {
        config.n_objects = value.get<std::size_t>();
      } else if (key == "show_prob") {
        config.show_prob = value.get<double>();
      } else if (key == "n_bins") {
        config.n_bins = value.get<std::size_t>();
      } else if (key == "window") {
        config.window = value.get<double>();
      } else if (key == "stride") {
        config.stride = value.get<double>();
      } else if (key == "min_samples") {
        config.min_samples = value.get<std::size_t>();
      } else if (key == "min_window_count") {
        config.min_window_count = value.get<std::size_t>();
      } else if (key == "min_visible_frac") {
        config.min_visible_frac = value.get<double>();
      } else if (key == "max_attempts") {
        config.max_attempts = value.get<int>();
      } else if (key == "min_visible") {
        config.min_visible = value.get<double>();
      } else if (key == "depth_scale") {
        config.depth_scale = value.get<double>();
      } else if (key == "prior") {
        config.prior = value.get<std::string>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "jobs") {
        config.jobs = value.get<unsigned>();
      } else {
        throw Error(ErrorCode::kSchemaError,
                    "unknown config key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception &) {
      throw Error(ErrorCode::kSchemaError,
                  "config key \"" + key + "\" has the wrong type");
    }
  }
}

}  // namespace scene_placer::cli
