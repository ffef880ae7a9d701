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

// Scalar reference kernels. These define the semantics; the AVX2 file
// mirrors the per-element operation order exactly.

#include <limits>

#include "saralert/kernels.hpp"

namespace saralert::kernels {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void s_add(double* dst, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i];
}

void s_sub(double* dst, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] -= a[i];
}

void s_ratio_accum(double* acc, const double* num, const double* den,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (den[i] > 0.0) {
      acc[i] += num[i] / den[i];
    } else {
      acc[i] = kNan;
    }
  }
}

void s_scaled_product(double* dst, const double* a, const double* acc,
                      double scale, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > 0.0) {
      dst[i] = (a[i] * acc[i]) * scale;
    } else {
      dst[i] = kNan;
    }
  }
}

void s_cos_ratio(double* dst, const double* num, const double* cosv,
                 double cos_floor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (cosv[i] > cos_floor) {
      dst[i] = num[i] / cosv[i];
    } else {
      dst[i] = kNan;
    }
  }
}

void s_lee_finalize(double* dst, const double* img, const double* wsum,
                    const double* wsumsq, double inv_count, double cu2,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = wsum[i] * inv_count;
    double var = wsumsq[i] * inv_count - m * m;
    if (var < 0.0) var = 0.0;
    const double ci2 = var / (m * m);
    const double w = ci2 > cu2 ? 1.0 - cu2 / ci2 : 0.0;
    dst[i] = m + w * (img[i] - m);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",   s_add,       s_sub,
      s_ratio_accum, s_scaled_product, s_cos_ratio,
      s_lee_finalize,
  };
  return ops;
}

}  // namespace saralert::kernels
