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

#include <gtest/gtest.h>

#include <random>

#include "scene_placer/refine.hpp"
#include "test_support.hpp"

namespace scene_placer {
namespace {

using testing::error_code_of;

InstanceMask blank_mask(int w, int h, PatchRect patch) {
  return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0),
          patch};
}

PlacedMask rect_mask(int x0, int y0, int w, int h) {
  return {x0, y0, w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 1)};
}

// Reference tight box: union of the frame rectangles covered by every set
// mask pixel.
BBox brute_force_box(const InstanceMask &m) {
  double l = 1e300, r = -1e300, t = 1e300, b = -1e300;
  const double sx = static_cast<double>(m.patch.side) / m.width;
  const double sy = static_cast<double>(m.patch.side) / m.height;
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    if (!m.bits[i]) continue;
    const int x = static_cast<int>(i % m.width);
    const int y = static_cast<int>(i / m.width);
    l = std::min(l, m.patch.x0 + x * sx);
    r = std::max(r, m.patch.x0 + (x + 1) * sx);
    t = std::min(t, m.patch.y0 + y * sy);
    b = std::max(b, m.patch.y0 + (y + 1) * sy);
  }
  return {0.5 * (l + r), b, r - l, b - t};
}

TEST(RefineBBoxTest, SinglePixelAndFullMask) {
  auto m = blank_mask(4, 4, {100, 50, 8});
  m.bits[1 * 4 + 2] = 1;
  const auto box = refine_bbox(m);
  EXPECT_DOUBLE_EQ(box.left(), 104);
  EXPECT_DOUBLE_EQ(box.right(), 106);
  EXPECT_DOUBLE_EQ(box.top(), 52);
  EXPECT_DOUBLE_EQ(box.bottom(), 54);
  std::fill(m.bits.begin(), m.bits.end(), 1);
  const auto full = refine_bbox(m);
  EXPECT_DOUBLE_EQ(full.left(), 100);
  EXPECT_DOUBLE_EQ(full.top(), 50);
  EXPECT_DOUBLE_EQ(full.w, 8);
  EXPECT_DOUBLE_EQ(full.h, 8);
}

TEST(RefineBBoxTest, Errors) {
  EXPECT_EQ(error_code_of([] { refine_bbox(blank_mask(3, 3, {0, 0, 3})); }),
            ErrorCode::kEmptyMask);
  InstanceMask bad{3, 3, std::vector<std::uint8_t>(4, 1), {0, 0, 3}};
  EXPECT_EQ(error_code_of([&] { refine_bbox(bad); }), ErrorCode::kInvalidArgument);
}

TEST(RefineBBoxTest, MatchesBruteForceOnRandomMasks) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> size(1, 64), pos(0, 500), side(1, 300);
  std::uniform_real_distribution<double> u(0, 1);
  for (int iter = 0; iter < 1000; ++iter) {
    auto m = blank_mask(size(gen), size(gen), {pos(gen), pos(gen), side(gen)});
    const double density = u(gen) * 0.3;
    for (auto &b : m.bits) b = u(gen) < density ? 1 : 0;
    if (m.count() == 0) m.bits[gen() % m.bits.size()] = 1;
    const auto got = refine_bbox(m);
    const auto want = brute_force_box(m);
    EXPECT_DOUBLE_EQ(got.cx, want.cx);
    EXPECT_DOUBLE_EQ(got.by, want.by);
    EXPECT_DOUBLE_EQ(got.w, want.w);
    EXPECT_DOUBLE_EQ(got.h, want.h);
    // The refined box never exceeds the crop it came from.
    EXPECT_GE(got.left(), m.patch.x0 - 1e-9);
    EXPECT_LE(got.right(), m.patch.x0 + m.patch.side + 1e-9);
  }
}

TEST(RasterizeTest, IdentityScaleAndClipping) {
  auto m = blank_mask(4, 4, {-2, 1, 4});
  for (int i = 0; i < 16; ++i) m.bits[i] = static_cast<std::uint8_t>(i % 2);
  const auto placed = rasterize(m, 10, 4);
  EXPECT_EQ(placed.x0, 0);
  EXPECT_EQ(placed.y0, 1);
  EXPECT_EQ(placed.width, 2);
  EXPECT_EQ(placed.height, 3);
  for (int fy = 1; fy < 4; ++fy) {
    for (int fx = 0; fx < 2; ++fx) {
      EXPECT_EQ(placed.contains(fx, fy), m.at(fx + 2, fy - 1));
    }
  }
  EXPECT_EQ(rasterize(m, 10, 1).width, 0);
}

TEST(RasterizeTest, SetPixelsInsideRefinedBox) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int iter = 0; iter < 200; ++iter) {
    auto m = blank_mask(32, 32, {static_cast<int>(u(gen) * 50),
                                 static_cast<int>(u(gen) * 50),
                                 8 + static_cast<int>(u(gen) * 100)});
    for (auto &b : m.bits) b = u(gen) < 0.05 ? 1 : 0;
    if (m.count() == 0) continue;
    const auto box = refine_bbox(m);
    const auto placed = rasterize(m, 400, 400);
    for (int y = 0; y < placed.height; ++y) {
      for (int x = 0; x < placed.width; ++x) {
        if (!placed.bits[y * placed.width + x]) continue;
        const double cx = placed.x0 + x + 0.5;
        const double cy = placed.y0 + y + 0.5;
        EXPECT_GE(cx, box.left());
        EXPECT_LE(cx, box.right());
        EXPECT_GE(cy, box.top());
        EXPECT_LE(cy, box.bottom());
      }
    }
  }
}

TEST(CompositeOrderTest, FarthestFirstStable) {
  EXPECT_EQ(composite_order(std::vector<double>{30, 10, 20}),
            (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(composite_order(std::vector<double>{5, 5, 1, 5}),
            (std::vector<std::size_t>{2, 0, 1, 3}));
  EXPECT_TRUE(composite_order({}).empty());
}

TEST(CompositeMasksTest, DisjointAndIdentical) {
  const std::vector<PlacedMask> disjoint{rect_mask(0, 0, 3, 3), rect_mask(5, 5, 2, 2)};
  const auto plan = composite_masks(disjoint, std::vector<std::size_t>{0, 1});
  EXPECT_EQ(plan.visible[0], disjoint[0]);
  EXPECT_EQ(plan.visible[1], disjoint[1]);
  EXPECT_EQ(plan.visible_frac, (std::vector<double>{1.0, 1.0}));

  const std::vector<PlacedMask> same{rect_mask(2, 2, 4, 4), rect_mask(2, 2, 4, 4)};
  const auto p2 = composite_masks(same, std::vector<std::size_t>{1, 0});
  EXPECT_EQ(p2.visible_frac, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(p2.visible[1].count(), 0u);
}

TEST(CompositeMasksTest, RejectsNonPermutation) {
  const std::vector<PlacedMask> masks{rect_mask(0, 0, 1, 1), rect_mask(0, 0, 1, 1)};
  EXPECT_EQ(error_code_of([&] {
              composite_masks(masks, std::vector<std::size_t>{0, 0});
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] {
              composite_masks(masks, std::vector<std::size_t>{0});
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] {
              composite_masks(masks, std::vector<std::size_t>{0, 2});
            }),
            ErrorCode::kInvalidArgument);
}

std::vector<PlacedMask> random_masks(std::mt19937_64 &gen, int n, int frame) {
  std::uniform_int_distribution<int> pos(0, frame - 1), size(1, frame / 2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<PlacedMask> masks;
  for (int k = 0; k < n; ++k) {
    PlacedMask m{pos(gen), pos(gen), size(gen), size(gen), {}};
    m.bits.resize(static_cast<std::size_t>(m.width) * m.height);
    const double density = 0.3 + 0.7 * u(gen);
    for (auto &b : m.bits) b = u(gen) < density ? 1 : 0;
    masks.push_back(std::move(m));
  }
  return masks;
}

TEST(CompositeMasksTest, MatchesPixelwiseMaxDisparity) {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> count(1, 6), depth(1, 8);
  for (int iter = 0; iter < 200; ++iter) {
    const int frame = 40;
    const auto masks = random_masks(gen, count(gen), frame);
    std::vector<double> depths;
    for (std::size_t k = 0; k < masks.size(); ++k) depths.push_back(depth(gen));
    const auto plan = composite_masks(masks, composite_order(depths));
    for (int y = 0; y < 2 * frame; ++y) {
      for (int x = 0; x < 2 * frame; ++x) {
        // Largest disparity wins; among equals the later input wins.
        std::optional<std::size_t> owner;
        for (std::size_t k = 0; k < masks.size(); ++k) {
          if (masks[k].contains(x, y) &&
              (!owner || depths[k] >= depths[*owner])) {
            owner = k;
          }
        }
        for (std::size_t k = 0; k < masks.size(); ++k) {
          ASSERT_EQ(plan.visible[k].contains(x, y), owner == k)
              << "iter " << iter << " pixel " << x << "," << y;
        }
      }
    }
    for (std::size_t k = 0; k < masks.size(); ++k) {
      const auto total = masks[k].count();
      const double want =
          total == 0 ? 0.0 : double(plan.visible[k].count()) / double(total);
      EXPECT_DOUBLE_EQ(plan.visible_frac[k], want);
    }
  }
}

TEST(VisibilityFilterTest, ZeroThresholdKeepsEverything) {
  std::mt19937_64 gen(1);
  const auto masks = random_masks(gen, 5, 30);
  const std::vector<std::size_t> order{0, 1, 2, 3, 4};
  const auto result = visibility_filter(masks, order, 0.0);
  EXPECT_EQ(result.kept, order);
  EXPECT_EQ(result.plan.visible, composite_masks(masks, order).visible);
}

TEST(VisibilityFilterTest, FullyOccludedMaskIsDroppedWithoutSideEffects) {
  const std::vector<PlacedMask> masks{rect_mask(0, 0, 10, 10),
                                      rect_mask(2, 2, 3, 3),
                                      rect_mask(20, 0, 4, 4)};
  // Mask 1 is farthest and hidden behind mask 0.
  const std::vector<std::size_t> order{1, 0, 2};
  const auto result = visibility_filter(masks, order, 0.2);
  EXPECT_EQ(result.kept, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(result.plan.visible[1].count(), 0u);

  const std::vector<PlacedMask> without{masks[0], masks[2]};
  const auto alone = composite_masks(without, std::vector<std::size_t>{0, 1});
  EXPECT_EQ(result.plan.visible[0], alone.visible[0]);
  EXPECT_EQ(result.plan.visible[2], alone.visible[1]);
}

TEST(VisibilityFilterTest, DroppedOccluderHidesNothing) {
  // Near A hides 60% of B; B would hide 60% of far C. With B dropped, C is
  // fully visible.
  const std::vector<PlacedMask> masks{rect_mask(0, 0, 6, 10),   // A
                                      rect_mask(0, 0, 10, 10),  // B
                                      rect_mask(4, 0, 10, 10)}; // C
  const std::vector<std::size_t> order{2, 1, 0};  // C far, A near
  const auto result = visibility_filter(masks, order, 0.5);
  EXPECT_EQ(result.kept, (std::vector<std::size_t>{0, 2}));
  EXPECT_DOUBLE_EQ(result.plan.visible_frac[2], 0.8);
}

TEST(VisibilityFilterTest, KeptSetIsConsistentOnRandomCases) {
  std::mt19937_64 gen(14);
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_real_distribution<double> thr(0.05, 0.9);
  for (int iter = 0; iter < 200; ++iter) {
    const auto masks = random_masks(gen, count(gen), 30);
    std::vector<std::size_t> order(masks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), gen);
    const double min_visible = thr(gen);
    const auto result = visibility_filter(masks, order, min_visible);
    std::vector<bool> kept(masks.size(), false);
    for (auto k : result.kept) kept[k] = true;
    // Each mask, judged against the kept masks nearer than it: kept iff
    // its uncovered share meets the threshold.
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const auto k = order[pos];
      std::size_t total = 0, shown = 0;
      for (int y = 0; y < 60; ++y) {
        for (int x = 0; x < 60; ++x) {
          if (!masks[k].contains(x, y)) continue;
          ++total;
          bool hidden = false;
          for (std::size_t q = pos + 1; q < order.size(); ++q) {
            hidden = hidden || (kept[order[q]] && masks[order[q]].contains(x, y));
          }
          shown += hidden ? 0 : 1;
        }
      }
      const double frac = total == 0 ? 0.0 : double(shown) / double(total);
      EXPECT_EQ(kept[k], frac >= min_visible) << "iter " << iter;
      if (kept[k]) {
        EXPECT_DOUBLE_EQ(result.plan.visible_frac[k], frac);
      }
    }
  }
}

PlacementProposal proposal_at(double cx, double by, double w, double h, double d) {
  PlacementProposal p;
  p.class_id = 1;
  p.d = d;
  p.d_sampled = d;
  p.box = {cx, by, w, h};
  return p;
}

TEST(RefineProposalsTest, TightensBoxesAndDropsOccluded) {
  const std::vector<PlacementProposal> props{
      proposal_at(50, 60, 20, 20, 30.0),  // near
      proposal_at(50, 60, 10, 10, 5.0),   // far, behind the first
      proposal_at(150, 60, 20, 20, 8.0),  // unmasked
  };
  std::vector<std::optional<InstanceMask>> masks(3);
  auto full = blank_mask(16, 16, {});
  std::fill(full.bits.begin(), full.bits.end(), 1);
  masks[0] = full;
  masks[1] = full;
  const auto out = refine_proposals(props, masks, 400, 200, 0.2);
  ASSERT_EQ(out.proposals.size(), 2u);
  EXPECT_EQ(out.dropped, 1u);
  const auto patch = crop_geometry(props[0].box, 400, 200);
  EXPECT_DOUBLE_EQ(out.proposals[0].box.left(), patch.x0);
  EXPECT_DOUBLE_EQ(out.proposals[0].box.w, patch.side);
  EXPECT_EQ(out.proposals[1].box, props[2].box);
}

TEST(RefineProposalsTest, EmptyMaskCountsAsOccluded) {
  const std::vector<PlacementProposal> props{proposal_at(50, 60, 20, 20, 30.0)};
  std::vector<std::optional<InstanceMask>> masks{blank_mask(8, 8, {})};
  const auto out = refine_proposals(props, masks, 400, 200, 0.2);
  EXPECT_TRUE(out.proposals.empty());
  EXPECT_EQ(out.dropped, 1u);
  std::vector<std::optional<InstanceMask>> wrong(2);
  EXPECT_EQ(error_code_of([&] { refine_proposals(props, wrong, 400, 200, 0.2); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace scene_placer
