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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "scene_placer/sampler.hpp"

namespace {

using namespace scene_placer;

LocationModel bench_model() {
  ClassModel cls;
  cls.class_id = 1;
  cls.depth = {std::log(20.0), 0.4};
  cls.height_mu_curve = {2.0, 0.9, 0.3, 1, 100};
  cls.height_sigma_curve = PowerCurve::constant(0.15, 1, 100);
  cls.aspect = {{0.5, 1.0, 1.5, 2.0}, {0.2, 0.5, 0.3}};
  LocationModel model;
  model.cameras[LocationModel::kPooledCamera][1] = cls;
  model.class_prior = {{1}, {1.0}};
  return model;
}

SceneContext bench_scene(int w, int h) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<float> depth(static_cast<std::size_t>(w) * h);
  std::vector<std::uint8_t> bits(depth.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      depth[static_cast<std::size_t>(y) * w + x] =
          static_cast<float>(80.0 * (y + 1) / h + u(gen));
      bits[static_cast<std::size_t>(y) * w + x] = y > h / 3 && u(gen) < 0.6;
    }
  }
  return SceneContext(w * 4, h * 4, "cam", DepthGrid(w, h, std::move(depth)),
                      DrivableMask(w, h, std::move(bits)));
}

void BM_AugmentFrame(benchmark::State &state) {
  const auto model = bench_model();
  const auto scene = bench_scene(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)) / 2);
  std::int64_t frame = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        augment_frame(scene, model, 12, frame_stream(1, frame++), {}));
  }
  state.SetItemsProcessed(state.iterations() * 12);
}
BENCHMARK(BM_AugmentFrame)->Arg(128)->Arg(512)->Arg(2048);

void BM_SceneContext(benchmark::State &state) {
  const auto scene = bench_scene(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)) / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SceneContext(scene.frame_w(), scene.frame_h(), "cam",
                                          scene.depth(), scene.drivable()));
  }
}
BENCHMARK(BM_SceneContext)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
