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

#ifndef SCENE_PLACER_EVAL_HPP_
#define SCENE_PLACER_EVAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scene_placer/model.hpp"
#include "scene_placer/rng.hpp"
#include "scene_placer/sampler.hpp"

namespace scene_placer {

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
/// Throws kInsufficientData if either sample is empty.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// A proposal together with the scene (index into the scene list) it was
/// placed in.
struct ScoredProposal {
  PlacementProposal proposal;
  std::size_t scene_index = 0;
};

struct ClassReport {
  int class_id = 0;
  std::size_t n_real = 0;
  std::size_t n_proposed = 0;
  /// False when either side has no samples; the KS fields are then empty.
  bool comparable = false;
  std::optional<double> ks_depth;
  std::optional<double> ks_height;
  std::optional<double> ks_aspect;
};

struct LayoutReport {
  std::vector<ClassReport> classes;
  std::size_t n_real = 0;
  std::size_t n_proposals = 0;
  std::size_t n_band_valid = 0;
  /// Unset when there are no proposals.
  std::optional<double> band_validity;
  double chi_square = 0;
  std::size_t chi_square_dof = 0;
  std::optional<double> chi_square_p;
};

/// True when the proposal's anchor pixel is drivable and its depth is
/// within tau of the proposal's d.
bool band_valid(const SceneContext &scene, const PlacementProposal &p,
                double tau);

/// Per-class KS distances between real and proposed (depth, height,
/// aspect) marginals, band validity of the proposals, and a chi-square of
/// proposal class counts against the model prior.
LayoutReport layout_report(std::span<const Observation> reals,
                           std::span<const ScoredProposal> proposals,
                           std::span<const SceneContext> scenes,
                           const LocationModel &model, double tau);

enum class BaselinePolicy {
  kOriginal,        // no added objects
  kRandomLocation,  // model sizes, anchor uniform over the whole frame
};

/// Comparison policies. kRandomLocation draws class, depth, height and
/// width from the model like the scene-aware sampler but ignores the
/// depth map and drivable space when choosing the anchor pixel.
AugmentResult baseline_augment(BaselinePolicy policy,
                               const SceneContext &scene,
                               const LocationModel &model,
                               std::size_t n_objects, const Rng &frame_rng,
                               const SamplerParams &params);

std::string report_to_json(const LayoutReport &report);
/// Aligned plain-text table.
std::string report_to_text(const LayoutReport &report);

}  // namespace scene_placer

#endif  // SCENE_PLACER_EVAL_HPP_
