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

#include "scene_placer/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "scene_placer/error.hpp"

namespace scene_placer {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kInsufficientData, "KS statistic needs two samples");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx -
                                 static_cast<double>(j) / ny));
  }
  // Remaining tail ends at |1 - F| which the last step already bounds.
  return std::min(sup, 1.0);
}

bool band_valid(const SceneContext &scene, const PlacementProposal &p,
                double tau) {
  const auto &depth = scene.depth();
  const Pixel px = anchor_pixel(p.box.cx, p.box.by, scene.scale(),
                                depth.width(), depth.height());
  if (p.box.cx < 0 || p.box.cx >= scene.frame_w() || p.box.by <= 0 ||
      p.box.by > scene.frame_h()) {
    return false;
  }
  return scene.drivable().at(px.x, px.y) &&
         std::abs(static_cast<double>(depth.at(px.x, px.y)) - p.d) <= tau;
}

LayoutReport layout_report(std::span<const Observation> reals,
                           std::span<const ScoredProposal> proposals,
                           std::span<const SceneContext> scenes,
                           const LocationModel &model, double tau) {
  struct Marginals {
    std::vector<double> d, h, aspect;
  };
  std::map<int, Marginals> real_by_class;
  std::map<int, Marginals> prop_by_class;
  for (const auto &o : reals) {
    auto &m = real_by_class[o.class_id];
    m.d.push_back(o.d);
    m.h.push_back(o.h);
    m.aspect.push_back(o.aspect);
  }

  LayoutReport report;
  report.n_real = reals.size();
  report.n_proposals = proposals.size();
  for (const auto &sp : proposals) {
    if (sp.scene_index >= scenes.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "proposal references a missing scene");
    }
    const auto &p = sp.proposal;
    auto &m = prop_by_class[p.class_id];
    m.d.push_back(p.d);
    m.h.push_back(p.box.h);
    m.aspect.push_back(p.box.w / p.box.h);
    if (band_valid(scenes[sp.scene_index], p, tau)) ++report.n_band_valid;
  }
  if (!proposals.empty()) {
    report.band_validity = static_cast<double>(report.n_band_valid) /
                           static_cast<double>(proposals.size());
  }

  std::map<int, int> all_classes;
  for (const auto &[c, m] : real_by_class) all_classes[c] = 0;
  for (const auto &[c, m] : prop_by_class) all_classes[c] = 0;
  for (const auto &[c, unused] : all_classes) {
    ClassReport cr;
    cr.class_id = c;
    const auto r = real_by_class.find(c);
    const auto p = prop_by_class.find(c);
    cr.n_real = r == real_by_class.end() ? 0 : r->second.d.size();
    cr.n_proposed = p == prop_by_class.end() ? 0 : p->second.d.size();
    cr.comparable = cr.n_real > 0 && cr.n_proposed > 0;
    if (cr.comparable) {
      cr.ks_depth = ks_statistic(r->second.d, p->second.d);
      cr.ks_height = ks_statistic(r->second.h, p->second.h);
      cr.ks_aspect = ks_statistic(r->second.aspect, p->second.aspect);
    }
    report.classes.push_back(cr);
  }

  // Class counts against the prior. Proposed classes outside the prior
  // contribute nothing here; they show up as incomparable rows instead.
  const auto &prior = model.class_prior;
  if (!proposals.empty() && prior.classes.size() > 1) {
    const auto n = static_cast<double>(proposals.size());
    for (std::size_t k = 0; k < prior.classes.size(); ++k) {
      const auto it = prop_by_class.find(prior.classes[k]);
      const double observed =
          it == prop_by_class.end() ? 0.0 : static_cast<double>(it->second.d.size());
      const double expected = n * prior.probs[k];
      if (expected > 0) {
        report.chi_square += (observed - expected) * (observed - expected) /
                             expected;
      }
    }
    report.chi_square_dof = prior.classes.size() - 1;
    report.chi_square_p = boost::math::gamma_q(
        0.5 * static_cast<double>(report.chi_square_dof),
        0.5 * report.chi_square);
  }
  return report;
}

AugmentResult baseline_augment(BaselinePolicy policy,
                               const SceneContext &scene,
                               const LocationModel &model,
                               std::size_t n_objects, const Rng &frame_rng,
                               const SamplerParams &params) {
  AugmentResult out;
  if (policy == BaselinePolicy::kOriginal) return out;
  const auto &depth = scene.depth();
  for (std::size_t i = 0; i < n_objects; ++i) {
    Rng rng = frame_rng.derive(i);
    bool placed = false;
    for (int attempt = 0; attempt < params.max_attempts && !placed; ++attempt) {
      const int class_id = sample_class(model, rng);
      const auto &cls = resolve_class(model, scene.camera_id(), class_id);
      const double d = sample_depth(cls, rng);
      const Pixel px{
          static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(depth.width()))),
          static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(depth.height())))};
      const double h = sample_height(cls, d, rng);
      const double w = sample_width(cls, h, rng);
      const auto anchor = anchor_point(px, scene.scale());
      const BBox box{anchor[0], anchor[1], w, h};
      if (visible_fraction(box, scene.frame_w(), scene.frame_h()) <
          params.min_visible_frac) {
        continue;
      }
      PlacementProposal p;
      p.class_id = class_id;
      p.d = d;
      p.d_sampled = d;
      p.box = box;
      p.show_prob = params.show_prob;
      p.stream_key = rng.key();
      p.attempt = attempt;
      out.proposals.push_back(std::move(p));
      placed = true;
    }
    if (!placed) ++out.dropped;
  }
  return out;
}

std::string report_to_json(const LayoutReport &report) {
  using ordered_json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double> &v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json classes = ordered_json::array();
  for (const auto &c : report.classes) {
    classes.push_back(ordered_json{{"class", c.class_id},
                                   {"n_real", c.n_real},
                                   {"n_proposed", c.n_proposed},
                                   {"comparable", c.comparable},
                                   {"ks_depth", opt(c.ks_depth)},
                                   {"ks_height", opt(c.ks_height)},
                                   {"ks_aspect", opt(c.ks_aspect)}});
  }
  ordered_json doc;
  doc["n_real"] = report.n_real;
  doc["n_proposals"] = report.n_proposals;
  doc["n_band_valid"] = report.n_band_valid;
  doc["band_validity"] = opt(report.band_validity);
  doc["chi_square"] = report.chi_square;
  doc["chi_square_dof"] = report.chi_square_dof;
  doc["chi_square_p"] = opt(report.chi_square_p);
  doc["classes"] = std::move(classes);
  return doc.dump(2) + "\n";
}

std::string report_to_text(const LayoutReport &report) {
  std::ostringstream out;
  char line[160];
  auto fmt = [](const std::optional<double> &v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof buf, "%.4f", *v);
    } else {
      std::snprintf(buf, sizeof buf, "%s", "n/a");
    }
    return std::string(buf);
  };
  std::snprintf(line, sizeof line, "%-8s %8s %10s %10s %10s %10s\n", "class",
                "n_real", "n_proposed", "ks_depth", "ks_height", "ks_aspect");
  out << line;
  for (const auto &c : report.classes) {
    std::snprintf(line, sizeof line, "%-8d %8zu %10zu %10s %10s %10s\n",
                  c.class_id, c.n_real, c.n_proposed, fmt(c.ks_depth).c_str(),
                  fmt(c.ks_height).c_str(), fmt(c.ks_aspect).c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "%-16s %zu / %zu (%s)\n", "band validity",
                report.n_band_valid, report.n_proposals,
                fmt(report.band_validity).c_str());
  out << line;
  std::snprintf(line, sizeof line, "%-16s %.4f (dof %zu, p %s)\n",
                "class chi2", report.chi_square, report.chi_square_dof,
                fmt(report.chi_square_p).c_str());
  out << line;
  return out.str();
}

}  // namespace scene_placer
