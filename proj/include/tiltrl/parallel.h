// Copyright 2026 The tiltrl Authors
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

#ifndef TILTRL_PARALLEL_H_
#define TILTRL_PARALLEL_H_

#include <functional>

namespace tiltrl {

// Runs fn(i) for i in [0, n) on up to `num_threads` threads in contiguous
// blocks. num_threads <= 1 runs inline. Results must not depend on the
// schedule; callers only touch per-index state.
void ParallelFor(int n, int num_threads, const std::function<void(int)>& fn);

// std::thread::hardware_concurrency with a floor of one.
int DefaultThreadCount();

}  // namespace tiltrl

#endif  // TILTRL_PARALLEL_H_
