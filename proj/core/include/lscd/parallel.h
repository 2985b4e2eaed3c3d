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

#ifndef LSCD_PARALLEL_H_
#define LSCD_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace lscd {

// Environment variable holding the default worker count.
inline constexpr const char kWorkersEnvVar[] = "LSCD_WORKERS";

// LSCD_WORKERS when set to a positive integer, else the hardware concurrency
// (at least 1).
std::size_t DefaultWorkerCount();

// Calls fn(i) for every i in [0, n) on at most `workers` threads. Indices are
// handed out in increasing order. The first exception thrown by fn is
// rethrown after all workers have stopped.
void ParallelFor(std::size_t n, std::size_t workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace lscd

#endif  // LSCD_PARALLEL_H_
