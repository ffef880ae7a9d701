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

#include <atomic>

#include "saralert/kernels.hpp"
#include "saralert/types.hpp"

namespace saralert::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp, null if not built

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2_ops_impl() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

std::atomic<Backend> g_backend{Backend::kAuto};

const Ops& resolve(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return scalar_ops();
    case Backend::kAvx2:
      return *avx2_ops_impl();
    case Backend::kAuto:
    default:
      return avx2_supported() ? *avx2_ops_impl() : scalar_ops();
  }
}

}  // namespace

void select_backend(Backend b) {
  if (b == Backend::kAvx2 && !avx2_supported())
    throw ConfigError("avx2 kernel backend requested but not available");
  g_backend.store(b, std::memory_order_relaxed);
}

Backend selected_backend() { return g_backend.load(std::memory_order_relaxed); }

const Ops& active() { return resolve(g_backend.load(std::memory_order_relaxed)); }

}  // namespace saralert::kernels
