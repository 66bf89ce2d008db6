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

#include "scene_placer/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "scene_placer/error.hpp"

namespace scene_placer {

namespace {

// Index drawn from a discrete distribution by inverse CDF.
std::size_t draw_index(const std::vector<double> &probs, Rng &rng) {
  const double u = rng.uniform();
  double cumulative = 0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

}  // namespace

SceneContext::SceneContext(int frame_w, int frame_h, std::string camera_id,
                           DepthGrid depth, DrivableMask drivable)
    : frame_w_(frame_w),
      frame_h_(frame_h),
      camera_id_(std::move(camera_id)),
      depth_(std::move(depth)),
      drivable_(std::move(drivable)) {
  if (frame_w_ <= 0 || frame_h_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be > 0");
  }
  if (depth_.width() != drivable_.width() ||
      depth_.height() != drivable_.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "depth grid and drivable mask differ in size");
  }
  if (depth_.size() == 0) {
    throw Error(ErrorCode::kInvalidGrid, "scene grids are empty");
  }
  scale_ = GridScale::between(depth_.width(), depth_.height(), frame_w_,
                              frame_h_);
  for (std::size_t i = 0; i < drivable_.size(); ++i) {
    if (drivable_.test(i)) {
      drivable_indices_.push_back(static_cast<std::uint32_t>(i));
    }
  }
  const auto values = depth_.values();
  depth_order_ = drivable_indices_;
  std::sort(depth_order_.begin(), depth_order_.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return values[a] < values[b] || (values[a] == values[b] && a < b);
            });
  depth_sorted_.reserve(depth_order_.size());
  for (auto i : depth_order_) depth_sorted_.push_back(values[i]);
}

const ClassModel &resolve_class(const LocationModel &model,
                                const std::string &camera_id, int class_id) {
  const auto *cls = model.find(camera_id, class_id);
  if (cls == nullptr) {
    throw Error(ErrorCode::kUnknownClass,
                "no model for class " + std::to_string(class_id) +
                    " on camera " + camera_id);
  }
  return *cls;
}

int sample_class(const LocationModel &model, Rng &rng) {
  const auto &prior = model.class_prior;
  if (prior.classes.empty() || prior.classes.size() != prior.probs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "class prior is empty");
  }
  return prior.classes[draw_index(prior.probs, rng)];
}

double sample_depth(const ClassModel &cls, Rng &rng) {
  const double z = rng.normal();
  return std::exp(cls.depth.mu + cls.depth.sigma * z);
}

LocationDraw sample_location(const SceneContext &scene, double d, double tau,
                             Rng &rng) {
  if (!(tau > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "band threshold must be > 0");
  }
  const auto &indices = scene.drivable_indices();
  if (indices.empty()) {
    throw Error(ErrorCode::kEmptyDrivableSpace, "no drivable pixels in scene");
  }
  const auto &sorted = scene.depth_sorted();

  // fl(v - target) is monotone in v, so |v - target| <= tau holds on one
  // contiguous run of the sorted depths.
  auto band = [&](double target) {
    const auto first = std::partition_point(
        sorted.begin(), sorted.end(),
        [&](double v) { return v - target < -tau; });
    const auto last = std::partition_point(
        first, sorted.end(), [&](double v) { return v - target <= tau; });
    return std::pair{first - sorted.begin(), last - sorted.begin()};
  };

  double target = d;
  auto [first, last] = band(target);
  if (first == last) {
    // Same rule as closest_allowed_depth: the nearest value, and on an
    // exact tie the one whose first pixel comes first in row-major order.
    // |v - d| is monotone on each side of d, so only the two neighbours
    // of d in sorted order can be nearest.
    const auto &order = scene.depth_order();
    const auto above = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), d) - sorted.begin());
    auto run_start = [&](std::size_t k) {
      return static_cast<std::size_t>(
          std::lower_bound(sorted.begin(), sorted.end(), sorted[k]) -
          sorted.begin());
    };
    std::size_t pick;
    if (above == sorted.size()) {
      pick = run_start(above - 1);
    } else if (above == 0) {
      pick = above;
    } else {
      const std::size_t below = run_start(above - 1);
      const double db = std::abs(sorted[below] - d);
      const double da = std::abs(sorted[above] - d);
      if (db < da) {
        pick = below;
      } else if (da < db) {
        pick = above;
      } else {
        pick = order[below] < order[above] ? below : above;
      }
    }
    target = sorted[pick];
    std::tie(first, last) = band(target);
  }
  if (first == last) {
    throw Error(ErrorCode::kEmptyDrivableSpace, "placement band is empty");
  }

  const auto k = rng.uniform_index(static_cast<std::uint64_t>(last - first));
  const auto i = scene.depth_order()[static_cast<std::size_t>(first) + k];
  const int w = scene.depth().width();
  return {{static_cast<int>(i % w), static_cast<int>(i / w)}, target};
}
double sample_height(const ClassModel &cls, double d, Rng &rng) {
  const double mu = cls.height_mu_curve.clamped(d);
  const double sigma = std::max(0.0, cls.height_sigma_curve.clamped(d));
  const double z = rng.normal();
  return std::exp(mu + sigma * z);
}

double sample_width(const ClassModel &cls, double h, Rng &rng) {
  const auto &hist = cls.aspect;
  if (hist.bins() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty aspect histogram");
  }
  const std::size_t bin = draw_index(hist.probs, rng);
  const double lo = hist.edges[bin];
  const double hi = hist.edges[bin + 1];
  const double ratio = lo + rng.uniform() * (hi - lo);
  return ratio * h;
}

PlacementProposal propose(const SceneContext &scene,
                          const LocationModel &model, Rng &rng,
                          const SamplerParams &params) {
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    const int class_id = sample_class(model, rng);
    const auto &cls = resolve_class(model, scene.camera_id(), class_id);
    const double d = sample_depth(cls, rng);
    const auto loc = sample_location(scene, d, params.tau, rng);
    const double h = sample_height(cls, loc.d_effective, rng);
    const double w = sample_width(cls, h, rng);
    const auto anchor = anchor_point(loc.pixel, scene.scale());
    const BBox box{anchor[0], anchor[1], w, h};
    if (visible_fraction(box, scene.frame_w(), scene.frame_h()) <
        params.min_visible_frac) {
      continue;
    }
    PlacementProposal p;
    p.class_id = class_id;
    p.d = loc.d_effective;
    p.d_sampled = d;
    p.box = box;
    p.show_prob = params.show_prob;
    p.stream_key = rng.key();
    p.attempt = attempt;
    return p;
  }
  throw Error(ErrorCode::kMaxAttemptsExceeded,
              "no acceptable box after " +
                  std::to_string(params.max_attempts) + " attempts");
}

Rng frame_stream(std::uint64_t master_seed, std::int64_t frame_id) noexcept {
  return Rng(master_seed).derive(static_cast<std::uint64_t>(frame_id));
}

AugmentResult augment_frame(const SceneContext &scene,
                            const LocationModel &model, std::size_t n_objects,
                            const Rng &frame_rng,
                            const SamplerParams &params) {
  AugmentResult out;
  out.proposals.reserve(n_objects);
  for (std::size_t i = 0; i < n_objects; ++i) {
    Rng rng = frame_rng.derive(i);
    try {
      out.proposals.push_back(propose(scene, model, rng, params));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kMaxAttemptsExceeded) throw;
      ++out.dropped;
    }
  }
  return out;
}

}  // namespace scene_placer
