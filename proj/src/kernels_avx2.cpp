// Copyright 2026-present the drivestyle project
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

#include <immintrin.h>

#include <cmath>

#include "drivestyle/kernels.hpp"

namespace drivestyle::kernels::avx2 {

namespace {

// 2^n for four int32 exponents, split into two half-steps so exponents below
// -1022 still reach the subnormal range instead of hitting the bias floor.
inline __m256d pow2_halves(__m128i n, __m256d value) {
  const __m128i n1 = _mm_srai_epi32(n, 1);
  const __m128i n2 = _mm_sub_epi32(n, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i b1 =
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52);
  const __m256i b2 =
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52);
  return _mm256_mul_pd(_mm256_mul_pd(value, _mm256_castsi256_pd(b1)),
                       _mm256_castsi256_pd(b2));
}

// exp() on four doubles: Cody-Waite range reduction against ln 2 followed by
// a rational approximation of exp(r) on |r| <= ln(2)/2, then scaling by 2^n.
// Finite inputs only. Stays within ~2 ulp of the libm result over the range
// used here (arguments are always <= 0).
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  // Below -746 even the subnormal scaling underflows to zero; above 709.8 the
  // result overflows to inf. Clamping keeps the bit manipulation in range.
  x = _mm256_max_pd(x, _mm256_set1_pd(-746.0));
  x = _mm256_min_pd(x, _mm256_set1_pd(709.782712893384));

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, r2, p1);
  px = _mm256_fmadd_pd(px, r2, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, r2, q1);
  qx = _mm256_fmadd_pd(qx, r2, q2);
  qx = _mm256_fmadd_pd(qx, r2, q3);

  const __m256d ratio = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  const __m256d e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), ratio, _mm256_set1_pd(1.0));
  return pow2_halves(_mm256_cvtpd_epi32(n), e);
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d sum2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
}

}  // namespace

double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth) {
  const double* p = points.data();
  const std::size_t n = points.size();

  const __m256d vx0 = _mm256_set1_pd(x0);
  const __m256d vinv = _mm256_set1_pd(inv_bandwidth);
  const __m256d vhalf = _mm256_set1_pd(-0.5);

  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d z0 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i), vx0), vinv);
    const __m256d z1 = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i + 4), vx0), vinv);
    acc0 = _mm256_add_pd(acc0, exp_pd(_mm256_mul_pd(vhalf, _mm256_mul_pd(z0, z0))));
    acc1 = _mm256_add_pd(acc1, exp_pd(_mm256_mul_pd(vhalf, _mm256_mul_pd(z1, z1))));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i), vx0), vinv);
    acc0 = _mm256_add_pd(acc0, exp_pd(_mm256_mul_pd(vhalf, _mm256_mul_pd(z, z))));
  }

  double acc = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double z = (p[i] - x0) * inv_bandwidth;
    acc += std::exp(-0.5 * z * z);
  }
  return acc;
}

}  // namespace drivestyle::kernels::avx2
