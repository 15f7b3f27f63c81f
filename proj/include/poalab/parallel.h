// Copyright 2026 The poa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POALAB_PARALLEL_H_
#define POALAB_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace poalab {

// Worker cap: POA_LAB_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t WorkerCount();

// Splits [0, n) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. Chunk boundaries depend only on n and the worker
// count, so results written to disjoint slots are deterministic.
void ParallelFor(std::size_t n,
                 const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace poalab

#endif  // POALAB_PARALLEL_H_
