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

// AVX2 kernel variants. Each lane performs the same operations in the
// same order as the scalar reference (mul/add kept separate, no FMA), so
// results are bit-identical; only the iteration is 4-wide. This file is
// compiled with -mavx2 and only dispatched to after a runtime CPU check.

#include "saralert/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <limits>

namespace saralert::kernels {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void v_add(double* dst, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_loadu_pd(a + i);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, v));
  }
  for (; i < n; ++i) dst[i] += a[i];
}

void v_sub(double* dst, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_loadu_pd(a + i);
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(d, v));
  }
  for (; i < n; ++i) dst[i] -= a[i];
}

void v_ratio_accum(double* acc, const double* num, const double* den,
                   std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d nan = _mm256_set1_pd(kNan);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(den + i);
    __m256d mask = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    __m256d q = _mm256_div_pd(_mm256_loadu_pd(num + i), d);
    __m256d updated = _mm256_add_pd(_mm256_loadu_pd(acc + i), q);
    _mm256_storeu_pd(acc + i, _mm256_blendv_pd(nan, updated, mask));
  }
  for (; i < n; ++i) {
    if (den[i] > 0.0) {
      acc[i] += num[i] / den[i];
    } else {
      acc[i] = kNan;
    }
  }
}

void v_scaled_product(double* dst, const double* a, const double* acc,
                      double scale, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d nan = _mm256_set1_pd(kNan);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d av = _mm256_loadu_pd(a + i);
    __m256d mask = _mm256_cmp_pd(av, zero, _CMP_GT_OQ);
    __m256d prod =
        _mm256_mul_pd(_mm256_mul_pd(av, _mm256_loadu_pd(acc + i)), s);
    _mm256_storeu_pd(dst + i, _mm256_blendv_pd(nan, prod, mask));
  }
  for (; i < n; ++i) {
    if (a[i] > 0.0) {
      dst[i] = (a[i] * acc[i]) * scale;
    } else {
      dst[i] = kNan;
    }
  }
}

void v_cos_ratio(double* dst, const double* num, const double* cosv,
                 double cos_floor, std::size_t n) {
  const __m256d floor = _mm256_set1_pd(cos_floor);
  const __m256d nan = _mm256_set1_pd(kNan);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d c = _mm256_loadu_pd(cosv + i);
    __m256d mask = _mm256_cmp_pd(c, floor, _CMP_GT_OQ);
    __m256d q = _mm256_div_pd(_mm256_loadu_pd(num + i), c);
    _mm256_storeu_pd(dst + i, _mm256_blendv_pd(nan, q, mask));
  }
  for (; i < n; ++i) {
    if (cosv[i] > cos_floor) {
      dst[i] = num[i] / cosv[i];
    } else {
      dst[i] = kNan;
    }
  }
}

void v_lee_finalize(double* dst, const double* img, const double* wsum,
                    const double* wsumsq, double inv_count, double cu2,
                    std::size_t n) {
  const __m256d inv = _mm256_set1_pd(inv_count);
  const __m256d vcu2 = _mm256_set1_pd(cu2);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = _mm256_mul_pd(_mm256_loadu_pd(wsum + i), inv);
    __m256d ex2 = _mm256_mul_pd(_mm256_loadu_pd(wsumsq + i), inv);
    __m256d msq = _mm256_mul_pd(m, m);
    __m256d var = _mm256_sub_pd(ex2, msq);
    // max_pd returns the second operand when var is NaN, but a NaN window
    // still surfaces through m below, matching the scalar path.
    var = _mm256_max_pd(var, zero);
    __m256d ci2 = _mm256_div_pd(var, msq);
    __m256d mask = _mm256_cmp_pd(ci2, vcu2, _CMP_GT_OQ);
    __m256d w = _mm256_sub_pd(one, _mm256_div_pd(vcu2, ci2));
    w = _mm256_blendv_pd(zero, w, mask);
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(img + i), m);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(m, _mm256_mul_pd(w, diff)));
  }
  for (; i < n; ++i) {
    const double m = wsum[i] * inv_count;
    double var = wsumsq[i] * inv_count - m * m;
    if (var < 0.0) var = 0.0;
    const double ci2 = var / (m * m);
    const double w = ci2 > cu2 ? 1.0 - cu2 / ci2 : 0.0;
    dst[i] = m + w * (img[i] - m);
  }
}

const Ops kAvx2Ops = {
    "avx2",        v_add,            v_sub,
    v_ratio_accum, v_scaled_product, v_cos_ratio,
    v_lee_finalize,
};

}  // namespace

const Ops* avx2_ops_impl() { return &kAvx2Ops; }

}  // namespace saralert::kernels

#else

namespace saralert::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace saralert::kernels

#endif  // __AVX2__
