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

#ifndef SCENE_PLACER_MODEL_HPP_
#define SCENE_PLACER_MODEL_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scene_placer/dataset.hpp"
#include "scene_placer/distributions.hpp"
#include "scene_placer/geometry.hpp"

namespace scene_placer {

enum class PriorMode { kUniform, kFrequency };

/// Fitting parameters. `tau` and `drivable_classes` are not used by the fit
/// itself; they are echoed into the model so sampling can reuse them.
struct FitConfig {
  double tau = 5.0;
  double window = 2.0;
  double stride = 1.0;
  std::size_t n_bins = 50;
  std::size_t min_samples = 30;
  std::size_t min_window_count = 10;
  std::vector<int> drivable_classes;
  /// Classes to model; empty means every class observed.
  std::vector<int> augmentable_classes;
  PriorMode prior = PriorMode::kUniform;
  /// Worker threads for per-(camera, class) fits. Not serialized.
  unsigned jobs = 1;

  friend bool operator==(const FitConfig &a, const FitConfig &b) {
    return a.tau == b.tau && a.window == b.window && a.stride == b.stride &&
           a.n_bins == b.n_bins && a.min_samples == b.min_samples &&
           a.min_window_count == b.min_window_count &&
           a.drivable_classes == b.drivable_classes &&
           a.augmentable_classes == b.augmentable_classes && a.prior == b.prior;
  }
};

/// Conditionals for one class: p(d|c), p(h|d,c) via curves over depth, and
/// the aspect-ratio (w/h) histogram for p(w|h,c).
struct ClassModel {
  int class_id = 0;
  LogNormalParams depth;
  PowerCurve height_mu_curve;
  PowerCurve height_sigma_curve;
  Histogram aspect;
  std::size_t sample_count = 0;
  /// True when the camera had too few samples and this is the pooled fit.
  bool fallback = false;

  friend bool operator==(const ClassModel &, const ClassModel &) = default;
};

struct ClassPrior {
  std::vector<int> classes;
  std::vector<double> probs;

  friend bool operator==(const ClassPrior &, const ClassPrior &) = default;
};

struct LocationModel {
  /// Camera key holding fits pooled over all cameras.
  static constexpr const char *kPooledCamera = "*";

  std::map<std::string, std::map<int, ClassModel>> cameras;
  ClassPrior class_prior;
  FitConfig config;

  /// Model for (camera, class), falling back to the pooled camera.
  /// Returns nullptr when neither exists.
  const ClassModel *find(const std::string &camera_id, int class_id) const;

  friend bool operator==(const LocationModel &, const LocationModel &) = default;
};

/// One ground-truth object reduced to the quantities the model conditions
/// on.
struct Observation {
  std::string camera_id;
  int class_id = 0;
  double d = 0;
  double h = 0;
  double aspect = 0;  // w / h
};

struct FitWarning {
  enum class Kind { kFallback, kExcluded, kSkippedFrame, kSkippedObject };
  Kind kind = Kind::kFallback;
  std::string camera_id;
  int class_id = -1;
  std::size_t count = 0;
  std::string message;
};

struct FitResult {
  LocationModel model;
  std::vector<FitWarning> warnings;
};

struct ObservationSet {
  std::vector<Observation> observations;
  std::size_t skipped_frames = 0;
  std::size_t skipped_objects = 0;
};

/// Returns the depth grid for a frame, or nullopt if it is unavailable.
using DepthLookup =
    std::function<std::optional<DepthGrid>(const AnnotatedFrame &)>;

/// Samples each annotation's depth at its bottom-center (see object_depth).
ObservationSet extract_observations(std::span<const AnnotatedFrame> frames,
                                    const DepthLookup &depth_lookup);

/// Fits one class from its observations (all from one camera or pooled).
ClassModel fit_class_model(int class_id, std::span<const Observation> obs,
                           const FitConfig &config);

/// Fits every (camera, class) pair plus the pooled camera. Result is
/// independent of observation order.
FitResult fit_observations(std::span<const Observation> obs,
                           const FitConfig &config);

/// extract_observations followed by fit_observations. Throws
/// kInsufficientData for an empty dataset.
FitResult fit_model(std::span<const AnnotatedFrame> frames,
                    const DepthLookup &depth_lookup, const FitConfig &config);

}  // namespace scene_placer

#endif  // SCENE_PLACER_MODEL_HPP_
