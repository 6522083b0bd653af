// Copyright 2026 The nvdfs Authors
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

#ifndef NVDFS_PARALLEL_HPP
#define NVDFS_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>

namespace nvdfs {

// 0 means one worker per hardware thread.
int resolve_threads(int requested);

// Calls body(i) for i in [0, n) on up to `threads` workers. Indices are handed
// out dynamically; the first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

// Independent stream seed for (seed, index), via splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nvdfs

#endif  // NVDFS_PARALLEL_HPP
