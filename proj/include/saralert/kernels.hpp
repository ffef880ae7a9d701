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

#ifndef SARALERT_KERNELS_HPP_
#define SARALERT_KERNELS_HPP_

#include <cstddef>

namespace saralert::kernels {

// Element-wise inner loops behind the filters and the calibration path.
// Each entry has a scalar reference implementation and, on CPUs that
// support it, an AVX2 variant. Variants vectorize across independent
// output elements and keep the exact per-element operation order of the
// scalar code (no FMA contraction), so the two backends are bit-identical;
// the kernel tests assert that. Reductions are deliberately not in this
// table: their summation order would differ between backends and make
// file outputs depend on the host CPU.
struct Ops {
  const char* name;

  // dst[i] += a[i]
  void (*add)(double* dst, const double* a, std::size_t n);
  // dst[i] -= a[i]
  void (*sub)(double* dst, const double* a, std::size_t n);
  // acc[i] += num[i] / den[i]; acc[i] becomes NaN where den[i] <= 0 or is
  // NaN (the division guard of the multitemporal filter).
  void (*ratio_accum)(double* acc, const double* num, const double* den,
                      std::size_t n);
  // dst[i] = (a[i] * acc[i]) * scale; NaN where a[i] <= 0 or is NaN.
  void (*scaled_product)(double* dst, const double* a, const double* acc,
                         double scale, std::size_t n);
  // dst[i] = num[i] / cosv[i] where cosv[i] > cos_floor, NaN otherwise
  // (incidence-angle masking).
  void (*cos_ratio)(double* dst, const double* num, const double* cosv,
                    double cos_floor, std::size_t n);
  // Lee minimum-MSE update from window sums:
  //   m    = wsum[i] * inv_count
  //   var  = max(0, wsumsq[i] * inv_count - m^2)
  //   ci2  = var / m^2
  //   w    = ci2 > cu2 ? 1 - cu2/ci2 : 0
  //   dst[i] = m + w * (img[i] - m)
  void (*lee_finalize)(double* dst, const double* img, const double* wsum,
                       const double* wsumsq, double inv_count, double cu2,
                       std::size_t n);
};

enum class Backend { kAuto, kScalar, kAvx2 };

const Ops& scalar_ops();
bool avx2_supported();

/// Selects the backend used by active(). kAuto picks the widest supported
/// one. Throws ConfigError when the requested backend is unavailable.
void select_backend(Backend b);
Backend selected_backend();

const Ops& active();

}  // namespace saralert::kernels

#endif  // SARALERT_KERNELS_HPP_
