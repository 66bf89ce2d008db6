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

#ifndef SCENE_PLACER_SAMPLER_HPP_
#define SCENE_PLACER_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scene_placer/geometry.hpp"
#include "scene_placer/model.hpp"
#include "scene_placer/rng.hpp"

namespace scene_placer {

/// A frame's conditioning inputs: depth and drivable space. The grids may
/// be stored at a lower resolution than the frame; scale() maps between
/// them.
class SceneContext {
 public:
  SceneContext(int frame_w, int frame_h, std::string camera_id,
               DepthGrid depth, DrivableMask drivable);

  int frame_w() const noexcept { return frame_w_; }
  int frame_h() const noexcept { return frame_h_; }
  const std::string &camera_id() const noexcept { return camera_id_; }
  const DepthGrid &depth() const noexcept { return depth_; }
  const DrivableMask &drivable() const noexcept { return drivable_; }
  GridScale scale() const noexcept { return scale_; }

  /// Row-major linear indices of drivable pixels.
  const std::vector<std::uint32_t> &drivable_indices() const noexcept {
    return drivable_indices_;
  }

  /// Drivable indices ordered by (depth, index), and their depths. Any
  /// placement band is a contiguous run of this order.
  const std::vector<std::uint32_t> &depth_order() const noexcept {
    return depth_order_;
  }
  const std::vector<double> &depth_sorted() const noexcept {
    return depth_sorted_;
  }

 private:
  int frame_w_;
  int frame_h_;
  std::string camera_id_;
  DepthGrid depth_;
  DrivableMask drivable_;
  GridScale scale_;
  std::vector<std::uint32_t> drivable_indices_;
  std::vector<std::uint32_t> depth_order_;
  std::vector<double> depth_sorted_;
};

struct SamplerParams {
  double tau = 5.0;
  double min_visible_frac = 0.25;
  int max_attempts = 25;
  double show_prob = 0.5;
};

struct PlacementProposal {
  int class_id = 0;
  /// Depth the box was placed at (after any reset to the closest allowed
  /// depth).
  double d = 0;
  /// Depth as drawn from p(d|c), before any reset.
  double d_sampled = 0;
  /// Unclipped box; the anchor sits on the sampled band pixel.
  BBox box;
  double show_prob = 0.5;
  std::uint64_t stream_key = 0;
  int attempt = 0;
  std::string mask_path;
};

struct LocationDraw {
  Pixel pixel;
  double d_effective = 0;
};

struct AugmentResult {
  std::vector<PlacementProposal> proposals;
  std::size_t dropped = 0;
};

/// Model for the scene's camera (or the pooled one). Throws kUnknownClass.
const ClassModel &resolve_class(const LocationModel &model,
                                const std::string &camera_id, int class_id);

/// Draws from the class prior.
int sample_class(const LocationModel &model, Rng &rng);

/// d = exp(mu + sigma * z).
double sample_depth(const ClassModel &cls, Rng &rng);

/// Uniform pixel from the placement band around d. An empty band resets d
/// to the closest allowed depth first. Band pixels are enumerated in
/// depth_order(). Throws kEmptyDrivableSpace.
LocationDraw sample_location(const SceneContext &scene, double d, double tau,
                             Rng &rng);

/// Log-normal height with parameters from the depth curves evaluated at d
/// clamped into their fitted domain.
double sample_height(const ClassModel &cls, double d, Rng &rng);

/// Width from an aspect ratio drawn from the histogram (uniform within the
/// chosen bin).
double sample_width(const ClassModel &cls, double h, Rng &rng);

/// One proposal via the full ancestral chain, rejecting boxes whose visible
/// fraction is below params.min_visible_frac. Throws kMaxAttemptsExceeded.
PlacementProposal propose(const SceneContext &scene,
                          const LocationModel &model, Rng &rng,
                          const SamplerParams &params);

/// Stream for one frame: a pure function of (master seed, frame id).
Rng frame_stream(std::uint64_t master_seed, std::int64_t frame_id) noexcept;

/// n_objects proposals, the i-th drawn from frame_rng.derive(i). Proposals
/// that exhaust their attempts are dropped and counted.
AugmentResult augment_frame(const SceneContext &scene,
                            const LocationModel &model, std::size_t n_objects,
                            const Rng &frame_rng, const SamplerParams &params);

}  // namespace scene_placer

#endif  // SCENE_PLACER_SAMPLER_HPP_
