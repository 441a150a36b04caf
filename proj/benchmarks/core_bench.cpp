// Copyright 2026 The ucal-bench Authors
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


#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "ucal/metrics.hpp"
#include "ucal/random.hpp"
#include "ucal/rearrange.hpp"
#include "ucal/scorers.hpp"
#include "ucal/stats.hpp"

namespace ucal {
namespace {

void BM_ComputeAll(benchmark::State& state) {
  Rng rng(1);
  ScoreSeries s;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) {
    s.entries.push_back({i, rng.uniform01(), rng.uniform_index(2) ? Label::kAnomalous : Label::kNormal});
  }
  for (auto _ : state) benchmark::DoNotOptimize(compute_all(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeAll)->Arg(1000)->Arg(60000)->Unit(benchmark::kMillisecond);

// Counts sized like the largest camera split used in the fixtures.
SplitSet count_only_split(std::size_t train, std::size_t test_normals, std::size_t anomalies) {
  SplitSet s;
  s.train.camera_id = s.test.camera_id = "C0";
  s.train.frames.resize(train);
  for (std::size_t i = 0; i < train; ++i) {
    s.train.frames[i].camera_id = "C0";
    s.train.frames[i].frame_index = i;
  }
  const std::size_t n = test_normals + anomalies;
  s.test.frames.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    FrameRecord& f = s.test.frames[i];
    f.camera_id = "C0";
    f.frame_index = train + i;
    f.label = (i + 1) * anomalies / n > i * anomalies / n ? Label::kAnomalous : Label::kNormal;
  }
  return s;
}

void BM_RearrangeC0(benchmark::State& state) {
  const SplitSet split = count_only_split(483220, 26093, 30667);
  RearrangePlan plan;
  plan.inject_count = 4615;
  for (auto _ : state) benchmark::DoNotOptimize(rearrange(split, plan));
}
BENCHMARK(BM_RearrangeC0)->Unit(benchmark::kMillisecond);

void BM_FrameMaxIou(benchmark::State& state) {
  Rng rng(2);
  FrameRecord f;
  for (std::int64_t p = 0; p < state.range(0); ++p) {
    PersonObservation o;
    const double x = rng.uniform(0.0, 1800.0);
    const double y = rng.uniform(0.0, 900.0);
    o.bbox = {x, y, x + rng.uniform(20.0, 120.0), y + rng.uniform(40.0, 180.0)};
    f.persons.push_back(o);
  }
  for (auto _ : state) benchmark::DoNotOptimize(frame_max_iou(f));
}
BENCHMARK(BM_FrameMaxIou)->Arg(4)->Arg(32)->Arg(128);

void BM_KnnScore(benchmark::State& state) {
  Rng rng(3);
  const std::size_t dim = 24 * 34;
  std::vector<std::vector<double>> stored(static_cast<std::size_t>(state.range(0)),
                                          std::vector<double>(dim));
  for (auto& v : stored) {
    for (double& x : v) x = rng.uniform(-0.5, 0.5);
  }
  KnnScorer knn(5, stored.size(), 7);
  knn.partial_fit_vectors(stored);
  std::vector<double> query(dim);
  for (double& x : query) x = rng.uniform(-0.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(knn.score_vector(query));
}
BENCHMARK(BM_KnnScore)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace ucal

BENCHMARK_MAIN();
