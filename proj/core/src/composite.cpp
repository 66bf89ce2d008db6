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

#include "scene_placer/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scene_placer/error.hpp"

namespace scene_placer {

namespace {

struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // exclusive
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

Rect union_rect(std::span<const PlacedMask> masks) {
  Rect r{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
         std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
  bool any = false;
  for (const auto &m : masks) {
    if (m.width <= 0 || m.height <= 0) continue;
    r.x0 = std::min(r.x0, m.x0);
    r.y0 = std::min(r.y0, m.y0);
    r.x1 = std::max(r.x1, m.x0 + m.width);
    r.y1 = std::max(r.y1, m.y0 + m.height);
    any = true;
  }
  return any ? r : Rect{};
}

void check_order(std::size_t n, std::span<const std::size_t> order,
                 bool allow_subset) {
  std::vector<std::uint8_t> seen(n, 0);
  for (auto i : order) {
    if (i >= n || seen[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "composite order is not a permutation");
    }
    seen[i] = 1;
  }
  if (!allow_subset && order.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "composite order is not a permutation");
  }
}

}  // namespace

std::size_t InstanceMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

std::size_t PlacedMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

BBox refine_bbox(const InstanceMask &mask) {
  if (mask.width <= 0 || mask.height <= 0 ||
      mask.bits.size() != static_cast<std::size_t>(mask.width) * mask.height) {
    throw Error(ErrorCode::kInvalidArgument, "mask dimensions do not match");
  }
  int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) throw Error(ErrorCode::kEmptyMask, "mask has no set pixels");

  const double sx = static_cast<double>(mask.patch.side) / mask.width;
  const double sy = static_cast<double>(mask.patch.side) / mask.height;
  const double left = mask.patch.x0 + min_x * sx;
  const double right = mask.patch.x0 + (max_x + 1) * sx;
  const double top = mask.patch.y0 + min_y * sy;
  const double bottom = mask.patch.y0 + (max_y + 1) * sy;
  return {0.5 * (left + right), bottom, right - left, bottom - top};
}

PlacedMask rasterize(const InstanceMask &mask, int frame_w, int frame_h) {
  const auto &p = mask.patch;
  const int x0 = std::max(p.x0, 0);
  const int y0 = std::max(p.y0, 0);
  const int x1 = std::min(p.x0 + p.side, frame_w);
  const int y1 = std::min(p.y0 + p.side, frame_h);
  PlacedMask out;
  if (x1 <= x0 || y1 <= y0 || mask.width <= 0 || mask.height <= 0) return out;
  out.x0 = x0;
  out.y0 = y0;
  out.width = x1 - x0;
  out.height = y1 - y0;
  out.bits.assign(static_cast<std::size_t>(out.width) * out.height, 0);
  const double kx = static_cast<double>(mask.width) / p.side;
  const double ky = static_cast<double>(mask.height) / p.side;
  for (int fy = y0; fy < y1; ++fy) {
    const int my = std::min(
        mask.height - 1, static_cast<int>(std::floor((fy - p.y0 + 0.5) * ky)));
    for (int fx = x0; fx < x1; ++fx) {
      const int mx = std::min(
          mask.width - 1, static_cast<int>(std::floor((fx - p.x0 + 0.5) * kx)));
      out.bits[static_cast<std::size_t>(fy - y0) * out.width + (fx - x0)] =
          mask.at(mx, my) ? 1 : 0;
    }
  }
  return out;
}

std::vector<std::size_t> composite_order(std::span<const double> depths) {
  std::vector<std::size_t> order(depths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return depths[a] < depths[b];
  });
  return order;
}

namespace {

CompositePlan paste(std::span<const PlacedMask> masks,
                    std::span<const std::size_t> order) {
  CompositePlan plan;
  plan.order.assign(order.begin(), order.end());
  plan.visible.resize(masks.size());
  plan.visible_frac.assign(masks.size(), 0.0);

  std::vector<PlacedMask> subset;
  for (auto i : order) subset.push_back(masks[i]);
  const Rect area = union_rect(subset);
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(
      static_cast<std::size_t>(area.width()) * area.height(), kNone);
  for (auto i : order) {
    const auto &m = masks[i];
    for (int y = 0; y < m.height; ++y) {
      for (int x = 0; x < m.width; ++x) {
        if (m.bits[static_cast<std::size_t>(y) * m.width + x] == 0) continue;
        const auto fx = static_cast<std::size_t>(m.x0 + x - area.x0);
        const auto fy = static_cast<std::size_t>(m.y0 + y - area.y0);
        owner[fy * area.width() + fx] = i;
      }
    }
  }
  for (auto i : order) {
    const auto &m = masks[i];
    PlacedMask vis{m.x0, m.y0, m.width, m.height,
                   std::vector<std::uint8_t>(m.bits.size(), 0)};
    std::size_t shown = 0;
    for (int y = 0; y < m.height; ++y) {
      for (int x = 0; x < m.width; ++x) {
        const auto local = static_cast<std::size_t>(y) * m.width + x;
        if (m.bits[local] == 0) continue;
        const auto fx = static_cast<std::size_t>(m.x0 + x - area.x0);
        const auto fy = static_cast<std::size_t>(m.y0 + y - area.y0);
        if (owner[fy * area.width() + fx] == i) {
          vis.bits[local] = 1;
          ++shown;
        }
      }
    }
    const auto total = m.count();
    plan.visible_frac[i] =
        total == 0 ? 0.0 : static_cast<double>(shown) / static_cast<double>(total);
    plan.visible[i] = std::move(vis);
  }
  return plan;
}

}  // namespace

CompositePlan composite_masks(std::span<const PlacedMask> masks,
                              std::span<const std::size_t> order) {
  check_order(masks.size(), order, false);
  return paste(masks, order);
}

VisibilityResult visibility_filter(std::span<const PlacedMask> masks,
                                   std::span<const std::size_t> order,
                                   double min_visible) {
  check_order(masks.size(), order, false);
  if (!(min_visible >= 0.0 && min_visible <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_visible must be in [0, 1]");
  }
  const Rect area = union_rect(masks);
  std::vector<std::uint8_t> covered(
      static_cast<std::size_t>(area.width()) * area.height(), 0);
  std::vector<std::uint8_t> keep(masks.size(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto &m = masks[*it];
    std::size_t total = 0;
    std::size_t shown = 0;
    for (int y = 0; y < m.height; ++y) {
      for (int x = 0; x < m.width; ++x) {
        if (m.bits[static_cast<std::size_t>(y) * m.width + x] == 0) continue;
        ++total;
        const auto fx = static_cast<std::size_t>(m.x0 + x - area.x0);
        const auto fy = static_cast<std::size_t>(m.y0 + y - area.y0);
        shown += covered[fy * area.width() + fx] == 0 ? 1 : 0;
      }
    }
    const double frac =
        total == 0 ? 0.0 : static_cast<double>(shown) / static_cast<double>(total);
    if (frac < min_visible) continue;
    keep[*it] = 1;
    for (int y = 0; y < m.height; ++y) {
      for (int x = 0; x < m.width; ++x) {
        if (m.bits[static_cast<std::size_t>(y) * m.width + x] == 0) continue;
        const auto fx = static_cast<std::size_t>(m.x0 + x - area.x0);
        const auto fy = static_cast<std::size_t>(m.y0 + y - area.y0);
        covered[fy * area.width() + fx] = 1;
      }
    }
  }

  VisibilityResult out;
  std::vector<std::size_t> kept_order;
  for (auto i : order) {
    if (keep[i]) kept_order.push_back(i);
  }
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (keep[i]) out.kept.push_back(i);
  }
  out.plan = paste(masks, kept_order);
  return out;
}

}  // namespace scene_placer
