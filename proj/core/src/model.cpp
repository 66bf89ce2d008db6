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

#include "scene_placer/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "scene_placer/error.hpp"
#include "scene_placer/parallel.hpp"

namespace scene_placer {

namespace {

bool by_value(const Observation &a, const Observation &b) {
  return std::tie(a.d, a.h, a.aspect) < std::tie(b.d, b.h, b.aspect);
}

// Constant curves for classes whose depth profile is too sparse to fit.
std::pair<PowerCurve, PowerCurve> flat_height_curves(
    std::span<const ProfilePoint> profile, std::span<const Observation> obs) {
  if (!profile.empty()) {
    double mu = 0;
    double sigma = 0;
    for (const auto &p : profile) {
      mu += p.mu_log_h;
      sigma += p.sigma_log_h;
    }
    const auto n = static_cast<double>(profile.size());
    const double lo = profile.front().d_center;
    const double hi = profile.back().d_center;
    return {PowerCurve::constant(mu / n, lo, hi),
            PowerCurve::constant(sigma / n, lo, hi)};
  }
  std::vector<double> heights;
  heights.reserve(obs.size());
  for (const auto &o : obs) heights.push_back(o.h);
  const auto params = fit_lognormal(heights);
  const double lo = obs.front().d;
  const double hi = obs.back().d;
  return {PowerCurve::constant(params.mu, lo, hi),
          PowerCurve::constant(params.sigma, lo, hi)};
}

}  // namespace

const ClassModel *LocationModel::find(const std::string &camera_id,
                                      int class_id) const {
  for (const auto &key : {camera_id, std::string(kPooledCamera)}) {
    const auto cam = cameras.find(key);
    if (cam == cameras.end()) continue;
    const auto it = cam->second.find(class_id);
    if (it != cam->second.end()) return &it->second;
  }
  return nullptr;
}

ObservationSet extract_observations(std::span<const AnnotatedFrame> frames,
                                    const DepthLookup &depth_lookup) {
  ObservationSet out;
  for (const auto &frame : frames) {
    if (frame.annotations.empty()) continue;
    auto depth = depth_lookup(frame);
    if (!depth || depth->size() == 0) {
      ++out.skipped_frames;
      continue;
    }
    const auto scale = GridScale::between(depth->width(), depth->height(),
                                          frame.width, frame.height);
    for (const auto &ann : frame.annotations) {
      if (!ann.box.valid()) {
        ++out.skipped_objects;
        continue;
      }
      const double d = object_depth(*depth, ann.box, scale);
      if (!(d > 0)) {
        ++out.skipped_objects;
        continue;
      }
      out.observations.push_back({frame.camera_id, ann.class_id, d, ann.box.h,
                                  ann.box.w / ann.box.h});
    }
  }
  return out;
}

ClassModel fit_class_model(int class_id, std::span<const Observation> obs,
                           const FitConfig &config) {
  if (obs.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "no observations for class " + std::to_string(class_id));
  }
  std::vector<Observation> sorted(obs.begin(), obs.end());
  std::sort(sorted.begin(), sorted.end(), by_value);

  std::vector<double> depths;
  std::vector<double> ratios;
  std::vector<DepthHeight> dh;
  depths.reserve(sorted.size());
  ratios.reserve(sorted.size());
  dh.reserve(sorted.size());
  for (const auto &o : sorted) {
    depths.push_back(o.d);
    ratios.push_back(o.aspect);
    dh.push_back({o.d, o.h});
  }

  ClassModel model;
  model.class_id = class_id;
  model.sample_count = sorted.size();
  model.depth = fit_lognormal(depths);
  model.aspect = build_aspect_histogram(ratios, config.n_bins);

  const auto profile = depth_height_profile(dh, config.window, config.stride,
                                            config.min_window_count);
  bool fitted = false;
  if (profile.size() >= 3) {
    std::vector<CurvePoint> mu_pts;
    std::vector<CurvePoint> sigma_pts;
    for (const auto &p : profile) {
      mu_pts.push_back({p.d_center, p.mu_log_h});
      sigma_pts.push_back({p.d_center, p.sigma_log_h});
    }
    try {
      model.height_mu_curve = fit_power_curve(mu_pts);
      model.height_sigma_curve = fit_power_curve(sigma_pts);
      fitted = true;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kDegenerateFit &&
          e.code() != ErrorCode::kInvalidSample) {
        throw;
      }
    }
  }
  if (!fitted) {
    std::tie(model.height_mu_curve, model.height_sigma_curve) =
        flat_height_curves(profile, sorted);
  }
  return model;
}

FitResult fit_observations(std::span<const Observation> obs,
                           const FitConfig &config) {
  if (obs.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no observations to fit");
  }
  std::set<int> classes(config.augmentable_classes.begin(),
                        config.augmentable_classes.end());
  if (classes.empty()) {
    for (const auto &o : obs) classes.insert(o.class_id);
  }

  // Canonical order makes every fitted scalar independent of input order.
  std::map<int, std::vector<Observation>> pooled;
  std::map<std::pair<std::string, int>, std::vector<Observation>> per_camera;
  std::set<std::string> cameras;
  for (const auto &o : obs) {
    cameras.insert(o.camera_id);
    if (!classes.contains(o.class_id)) continue;
    pooled[o.class_id].push_back(o);
    per_camera[{o.camera_id, o.class_id}].push_back(o);
  }

  struct Job {
    std::string camera;
    int class_id;
    const std::vector<Observation> *obs;
    ClassModel result;
  };
  std::vector<Job> jobs;
  FitResult out;
  std::set<int> pooled_ok;
  for (int c : classes) {
    const auto it = pooled.find(c);
    const std::size_t n = it == pooled.end() ? 0 : it->second.size();
    if (n < config.min_samples || n < 2) {
      out.warnings.push_back(
          {FitWarning::Kind::kExcluded, LocationModel::kPooledCamera, c, n,
           "class " + std::to_string(c) + " has " + std::to_string(n) +
               " samples over all cameras; excluded"});
      continue;
    }
    pooled_ok.insert(c);
    jobs.push_back({LocationModel::kPooledCamera, c, &it->second, {}});
  }
  std::vector<std::pair<std::string, int>> fallbacks;
  for (const auto &cam : cameras) {
    for (int c : pooled_ok) {
      const auto it = per_camera.find({cam, c});
      const std::size_t n = it == per_camera.end() ? 0 : it->second.size();
      if (n >= config.min_samples && n >= 2) {
        jobs.push_back({cam, c, &it->second, {}});
      } else {
        fallbacks.emplace_back(cam, c);
        out.warnings.push_back(
            {FitWarning::Kind::kFallback, cam, c, n,
             "camera " + cam + " class " + std::to_string(c) + " has " +
                 std::to_string(n) + " samples; using pooled model"});
      }
    }
  }

  parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
    jobs[i].result = fit_class_model(jobs[i].class_id, *jobs[i].obs, config);
  });

  auto &model = out.model;
  model.config = config;
  for (auto &job : jobs) {
    model.cameras[job.camera][job.class_id] = std::move(job.result);
  }
  for (const auto &[cam, c] : fallbacks) {
    ClassModel fb = model.cameras[LocationModel::kPooledCamera].at(c);
    fb.fallback = true;
    model.cameras[cam][c] = std::move(fb);
  }

  double total = 0;
  for (int c : pooled_ok) {
    model.class_prior.classes.push_back(c);
    const double weight = config.prior == PriorMode::kUniform
                              ? 1.0
                              : static_cast<double>(pooled.at(c).size());
    model.class_prior.probs.push_back(weight);
    total += weight;
  }
  for (auto &p : model.class_prior.probs) p /= total;
  return out;
}

FitResult fit_model(std::span<const AnnotatedFrame> frames,
                    const DepthLookup &depth_lookup, const FitConfig &config) {
  if (frames.empty()) {
    throw Error(ErrorCode::kInsufficientData, "dataset has no frames");
  }
  auto extracted = extract_observations(frames, depth_lookup);
  if (extracted.observations.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "dataset has no annotations with resolvable depth");
  }
  auto result = fit_observations(extracted.observations, config);
  if (extracted.skipped_frames > 0) {
    result.warnings.push_back(
        {FitWarning::Kind::kSkippedFrame, "", -1, extracted.skipped_frames,
         std::to_string(extracted.skipped_frames) +
             " annotated frames had no depth grid"});
  }
  if (extracted.skipped_objects > 0) {
    result.warnings.push_back(
        {FitWarning::Kind::kSkippedObject, "", -1, extracted.skipped_objects,
         std::to_string(extracted.skipped_objects) +
             " objects had a degenerate box or zero depth"});
  }
  return result;
}

}  // namespace scene_placer
