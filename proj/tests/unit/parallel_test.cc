// Copyright 2026 The lscd Authors.
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

#include "lscd/parallel.h"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

namespace lscd {
namespace {

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (std::size_t workers : {1u, 2u, 7u, 64u}) {
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, ZeroItemsAndZeroWorkers) {
  int calls = 0;
  ParallelFor(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
  ParallelFor(3, 0, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 3);
}

TEST(ParallelForTest, RethrowsWorkerException) {
  EXPECT_THROW(ParallelFor(100, 4,
                           [](std::size_t i) {
                             if (i == 37) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(DefaultWorkerCountTest, ReadsEnvironment) {
  ::setenv(kWorkersEnvVar, "3", 1);
  EXPECT_EQ(DefaultWorkerCount(), 3u);
  ::setenv(kWorkersEnvVar, "junk", 1);
  EXPECT_GE(DefaultWorkerCount(), 1u);
  ::setenv(kWorkersEnvVar, "0", 1);
  EXPECT_GE(DefaultWorkerCount(), 1u);
  ::unsetenv(kWorkersEnvVar);
  EXPECT_GE(DefaultWorkerCount(), 1u);
}

}  // namespace
}  // namespace lscd
