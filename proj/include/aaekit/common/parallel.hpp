// include/aaekit/common/parallel.hpp

// Copyright 2026 The aaekit authors

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

#ifndef AAEKIT_COMMON_PARALLEL_HPP_
#define AAEKIT_COMMON_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace aaekit {

/// Runs fn(0..n-1) on up to `jobs` worker threads. Each index is processed
/// exactly once; callers must write results by index so the outcome does not
/// depend on scheduling. The first exception thrown by any worker is
/// rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace aaekit

#endif  // AAEKIT_COMMON_PARALLEL_HPP_
