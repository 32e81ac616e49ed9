// Copyright 2026 The Netshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NETSHUFFLE_PARALLEL_H_
#define NETSHUFFLE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace netshuffle {

// Number of worker threads used when a caller passes threads <= 0.
int DefaultThreadCount();

// Runs body(begin, end) over a static partition of [0, count) using up to
// `threads` workers. Blocks until every chunk finishes. The partition
// depends only on (count, threads), never on timing.
void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t, std::size_t)>& body,
                 int threads = 0);

}  // namespace netshuffle

#endif  // NETSHUFFLE_PARALLEL_H_
