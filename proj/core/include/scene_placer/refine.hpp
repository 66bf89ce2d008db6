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

#ifndef SCENE_PLACER_REFINE_HPP_
#define SCENE_PLACER_REFINE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "scene_placer/composite.hpp"
#include "scene_placer/sampler.hpp"

namespace scene_placer {

struct RefinedProposals {
  std::vector<PlacementProposal> proposals;
  /// Proposals removed by the visibility filter.
  std::size_t dropped = 0;
};

/// Applies generated masks to a frame's proposals. masks[i] is the mask
/// produced for proposal i over its inpainting crop (crop_geometry of the
/// proposal box), at any resolution; nullopt leaves the proposal as is.
/// Masked proposals get tight boxes, are composited far to near and
/// dropped when less than `min_visible` of the mask stays visible.
/// Empty masks count as fully occluded.
RefinedProposals refine_proposals(
    std::span<const PlacementProposal> proposals,
    std::span<const std::optional<InstanceMask>> masks, int frame_w,
    int frame_h, double min_visible);

}  // namespace scene_placer

#endif  // SCENE_PLACER_REFINE_HPP_
