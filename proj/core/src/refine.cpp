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

#include "scene_placer/refine.hpp"

#include <algorithm>

#include "scene_placer/error.hpp"
#include "scene_placer/geometry.hpp"

namespace scene_placer {

RefinedProposals refine_proposals(
    std::span<const PlacementProposal> proposals,
    std::span<const std::optional<InstanceMask>> masks, int frame_w,
    int frame_h, double min_visible) {
  if (masks.size() != proposals.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one mask slot per proposal is required");
  }
  std::vector<PlacementProposal> out(proposals.begin(), proposals.end());
  std::vector<std::size_t> masked;
  std::vector<PlacedMask> placed;
  std::vector<double> depths;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    if (!masks[i]) continue;
    InstanceMask mask = *masks[i];
    mask.patch = crop_geometry(proposals[i].box, frame_w, frame_h);
    if (mask.count() > 0) {
      out[i].box = refine_bbox(mask);
    }
    masked.push_back(i);
    placed.push_back(rasterize(mask, frame_w, frame_h));
    depths.push_back(proposals[i].d);
  }

  std::vector<std::uint8_t> keep(proposals.size(), 1);
  if (!masked.empty()) {
    const auto order = composite_order(depths);
    const auto vis = visibility_filter(placed, order, min_visible);
    for (auto &k : masked) keep[k] = 0;
    for (auto k : vis.kept) keep[masked[k]] = 1;
  }

  RefinedProposals result;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (keep[i]) {
      result.proposals.push_back(std::move(out[i]));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

}  // namespace scene_placer
