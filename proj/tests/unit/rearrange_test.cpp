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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ucal/error.hpp"
#include "ucal/rearrange.hpp"

namespace ucal {
namespace {

std::vector<FrameIndex> sorted_ids(std::span<const FrameRecord> a, std::span<const FrameRecord> b) {
  std::vector<FrameIndex> ids;
  for (const auto& f : a) ids.push_back(f.frame_index);
  for (const auto& f : b) ids.push_back(f.frame_index);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TEST(SliceOffsets, RemainderGoesFirst) {
  EXPECT_EQ(slice_offsets(10, 3), (std::vector<std::size_t>{0, 4, 7, 10}));
  EXPECT_EQ(slice_offsets(9, 9).size(), 10u);
  EXPECT_THROW(slice_offsets(3, 4), DataError);
  EXPECT_THROW(slice_offsets(3, 0), DataError);
}

TEST(SliceOffsets, SizesDifferByAtMostOne) {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + rng.uniform_index(20);
    const std::size_t n = k + rng.uniform_index(1000);
    const auto off = slice_offsets(n, k);
    ASSERT_EQ(off.size(), k + 1);
    EXPECT_EQ(off.front(), 0u);
    EXPECT_EQ(off.back(), n);
    std::size_t lo = n;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < k; ++i) {
      lo = std::min(lo, off[i + 1] - off[i]);
      hi = std::max(hi, off[i + 1] - off[i]);
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Balance, ToleranceRule) {
  EXPECT_TRUE(is_balanced(26093, 26052, 0.002));
  EXPECT_TRUE(is_balanced(10, 10, 0.0));
  EXPECT_FALSE(is_balanced(12, 10, 0.05));
}

TEST(Rearrange, C0Fixture) {
  const SplitSet split = oracle::c0_split();
  RearrangePlan plan;
  plan.seed = 0;
  plan.inject_count = 4615;
  const ContinualSplit cs = rearrange(split, plan);
  const ContinualStats st = verify(cs);
  EXPECT_EQ(st.train.frame_count, 487835u);
  EXPECT_NEAR(st.train.anomaly_fraction * 100.0, 0.95, 0.005);
  EXPECT_EQ(st.test.frame_count - st.test.anomaly_frame_count, 26093u);
  EXPECT_EQ(st.test.anomaly_frame_count, 26052u);
  EXPECT_NEAR(st.test.anomaly_fraction * 100.0, 49.96, 0.05);
  EXPECT_EQ(sorted_ids(cs.train_stream, cs.test.frames),
            sorted_ids(split.train.frames, split.test.frames));
}

// Largest admissible count found by trying every candidate.
TEST(Rearrange, AutoInjectCountIsLargestAdmissible) {
  Rng rng(12);
  const RearrangePlan plan;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t a = 1 + rng.uniform_index(80);
    const std::size_t tn = rng.uniform_index(3 * a);
    const std::size_t n = rng.uniform_index(9000);
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < a; ++c) {
      const std::size_t rem = a - c;
      const double gap = std::abs(static_cast<double>(tn) - static_cast<double>(rem)) /
                         static_cast<double>(tn + rem);
      std::size_t moved = 0;
      if (gap > plan.balance_tolerance) {
        if (tn <= rem) continue;
        moved = tn - rem;
      }
      const std::size_t stream = n + moved + c;
      if (stream >= plan.k && static_cast<double>(c) / static_cast<double>(stream) < 0.01) best = c;
    }
    EXPECT_EQ(auto_inject_count(n, tn, a, plan), best) << a << " " << tn << " " << n;
  }
}

TEST(Rearrange, RandomSplitsSatisfyInvariants) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const SplitSet split = oracle::random_split(rng);
    RearrangePlan plan;
    plan.seed = derive_seed(seed, "plan");
    plan.k = 1 + rng.uniform_index(12);
    const ContinualSplit cs = rearrange(split, plan);
    ASSERT_NO_THROW(verify(cs)) << "seed " << seed;

    std::size_t injected = 0;
    for (const auto& f : cs.train_stream) injected += f.label == Label::kAnomalous;
    EXPECT_LT(static_cast<double>(injected) / static_cast<double>(cs.train_stream.size()), 0.01);

    std::size_t an = 0;
    for (const auto& f : cs.test.frames) an += f.label == Label::kAnomalous;
    const std::size_t no = cs.test.frames.size() - an;
    EXPECT_LE(std::abs(static_cast<double>(no) - static_cast<double>(an)) /
                  static_cast<double>(cs.test.frames.size()),
              plan.balance_tolerance + 1e-12);

    ASSERT_EQ(cs.slice_count(), plan.k);
    std::size_t total = 0;
    for (std::size_t i = 0; i < cs.slice_count(); ++i) total += cs.slice(i).size();
    EXPECT_EQ(total, cs.train_stream.size());

    EXPECT_EQ(sorted_ids(cs.train_stream, cs.test.frames),
              sorted_ids(split.train.frames, split.test.frames));

    const ContinualSplit again = rearrange(split, plan);
    EXPECT_EQ(again.train_stream, cs.train_stream);
    EXPECT_EQ(again.test, cs.test);
    EXPECT_EQ(again.train_origin, cs.train_origin);
  }
}

TEST(Rearrange, OriginalTrainOrderPreserved) {
  Rng rng(1);
  const SplitSet split = oracle::random_split(rng);
  const ContinualSplit cs = rearrange(split, RearrangePlan{});
  FrameIndex last = 0;
  bool first = true;
  for (std::size_t i = 0; i < cs.train_stream.size(); ++i) {
    if (cs.train_origin[i] != Origin::kOrigTrainNormal) continue;
    if (!first) EXPECT_GT(cs.train_stream[i].frame_index, last);
    first = false;
    last = cs.train_stream[i].frame_index;
  }
}

TEST(Rearrange, ProvenanceMatchesLabels) {
  Rng rng(2);
  const ContinualSplit cs = rearrange(oracle::random_split(rng), RearrangePlan{});
  for (std::size_t i = 0; i < cs.train_stream.size(); ++i) {
    EXPECT_EQ(cs.train_origin[i] == Origin::kInjectedAnomaly,
              cs.train_stream[i].label == Label::kAnomalous);
  }
  for (std::size_t i = 0; i < cs.test.frames.size(); ++i) {
    EXPECT_EQ(cs.test_origin[i] == Origin::kTestAnomaly,
              cs.test.frames[i].label == Label::kAnomalous);
  }
}

TEST(Rearrange, SeedChangesSelection) {
  Rng rng(3);
  const SplitSet split = oracle::random_split(rng);
  RearrangePlan a;
  a.seed = 1;
  RearrangePlan b;
  b.seed = 2;
  EXPECT_NE(rearrange(split, a).train_stream, rearrange(split, b).train_stream);
}

TEST(Rearrange, Errors) {
  Rng rng(4);
  const SplitSet split = oracle::random_split(rng);
  RearrangePlan plan;
  plan.inject_count = split.test.frames.size();
  EXPECT_THROW(rearrange(split, plan), DataError);

  plan.inject_count = 1000;  // far over the 1% cap for these sizes
  EXPECT_THROW(rearrange(split, plan), DataError);

  SplitSet no_anomalies = split;
  for (auto& f : no_anomalies.test.frames) {
    f.label = Label::kNormal;
    f.anomaly_regions.clear();
  }
  EXPECT_THROW(rearrange(no_anomalies, RearrangePlan{}), DataError);

  RearrangePlan bad_k;
  bad_k.k = 0;
  EXPECT_THROW(rearrange(split, bad_k), DataError);
}

TEST(Verify, DetectsLeakedTestFrame) {
  Rng rng(5);
  ContinualSplit cs = rearrange(oracle::random_split(rng), RearrangePlan{});
  cs.train_stream.back() = cs.test.frames.front();
  cs.train_origin.back() = cs.test.frames.front().label == Label::kAnomalous
                               ? Origin::kInjectedAnomaly
                               : Origin::kMovedTestNormal;
  try {
    verify(cs);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("disjoint"), std::string::npos) << e.what();
  }
}

TEST(Verify, DetectsBrokenSlicePartition) {
  Rng rng(6);
  ContinualSplit cs = rearrange(oracle::random_split(rng), RearrangePlan{});
  cs.slice_offsets.back() -= 1;
  EXPECT_THROW(verify(cs), DataError);
}

}  // namespace
}  // namespace ucal
