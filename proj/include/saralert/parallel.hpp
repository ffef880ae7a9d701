/*
 * Copyright 2026 The saralert authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SARALERT_PARALLEL_HPP_
#define SARALERT_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace saralert {

/// Caps the number of worker threads used by parallel_chunks. n <= 0
/// restores the hardware default. The cap is process-global (set once by
/// the CLI's --threads flag).
void set_worker_cap(int n);
int worker_cap();

/// Splits [0, count) into contiguous chunks and runs fn(begin, end) on up
/// to worker_cap() threads. fn must only touch disjoint state per chunk.
/// Runs inline when the cap is 1 or the range is small. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace saralert

#endif  // SARALERT_PARALLEL_HPP_
