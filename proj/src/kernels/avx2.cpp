// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2 -mno-fma -ffp-contract=off. Elementwise kernels give the
// same bits as the scalar table; reductions differ only in summation order.

#include <immintrin.h>

#include "ntfd/kernels.hpp"

namespace ntfd::kernels {

const Table* avx2_table();

namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);
  const __m256d ai = _mm256_permute_pd(a, 0xF);
  const __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(ar, b), _mm256_mul_pd(ai, bs));
}

inline __m256d bcast(cd z) { return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag()); }

inline double* dp(cd* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cd* p) { return reinterpret_cast<const double*>(p); }

inline cd hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

void axpy(std::size_t n, cd alpha, const cd* x, cd* y) {
  const __m256d a = bcast(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + i));
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(yv, cmul2(a, xv)));
  }
  if (i < n) scalar().axpy(n - i, alpha, x + i, y + i);
}

void xpay(std::size_t n, const cd* x, cd alpha, const cd* y, cd* out) {
  const __m256d a = bcast(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + i));
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(out + i), _mm256_add_pd(xv, cmul2(a, yv)));
  }
  if (i < n) scalar().xpay(n - i, x + i, alpha, y + i, out + i);
}

cd dotu(std::size_t n, const cd* x, const cd* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = _mm256_add_pd(acc, cmul2(_mm256_loadu_pd(dp(x + i)), _mm256_loadu_pd(dp(y + i))));
  cd s = hsum(acc);
  if (i < n) s += scalar().dotu(n - i, x + i, y + i);
  return s;
}

cd dotc(std::size_t n, const cd* x, const cd* y) {
  const __m256d conj = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_xor_pd(_mm256_loadu_pd(dp(x + i)), conj);
    acc = _mm256_add_pd(acc, cmul2(xv, _mm256_loadu_pd(dp(y + i))));
  }
  cd s = hsum(acc);
  if (i < n) s += scalar().dotc(n - i, x + i, y + i);
  return s;
}

void csr_matvec(std::size_t rows, const int* outer, const int* inner, const cd* values,
                const cd* x, cd* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    __m256d acc = _mm256_setzero_pd();
    int k = outer[r];
    const int end = outer[r + 1];
    for (; k + 2 <= end; k += 2) {
      const __m256d v = _mm256_loadu_pd(dp(values + k));
      const __m256d u = _mm256_set_m128d(_mm_loadu_pd(dp(x + inner[k + 1])),
                                         _mm_loadu_pd(dp(x + inner[k])));
      acc = _mm256_add_pd(acc, cmul2(v, u));
    }
    cd s = hsum(acc);
    if (k < end) {
      const cd v = values[k];
      const cd u = x[inner[k]];
      s += cd(v.real() * u.real() - v.imag() * u.imag(), v.real() * u.imag() + v.imag() * u.real());
    }
    y[r] = s;
  }
}

void linear2_step(std::size_t n, const cd* D, double dt, cd* y0, cd* y1, const cd* w0,
                  const cd* w1) {
  const __m256d d00 = bcast(D[0]), d01 = bcast(D[1]), d10 = bcast(D[2]), d11 = bcast(D[3]);
  const __m256d h = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d u0 = _mm256_loadu_pd(dp(y0 + i));
    const __m256d u1 = _mm256_loadu_pd(dp(y1 + i));
    const __m256d f0 = _mm256_add_pd(cmul2(d00, u0), cmul2(d01, u1));
    const __m256d f1 = _mm256_add_pd(cmul2(d10, u0), cmul2(d11, u1));
    const __m256d n0 = _mm256_add_pd(_mm256_add_pd(u0, _mm256_mul_pd(h, f0)),
                                     _mm256_loadu_pd(dp(w0 + i)));
    const __m256d n1 = _mm256_add_pd(_mm256_add_pd(u1, _mm256_mul_pd(h, f1)),
                                     _mm256_loadu_pd(dp(w1 + i)));
    _mm256_storeu_pd(dp(y0 + i), n0);
    _mm256_storeu_pd(dp(y1 + i), n1);
  }
  if (i < n) scalar().linear2_step(n - i, D, dt, y0 + i, y1 + i, w0 + i, w1 + i);
}

const Table kAvx2{"avx2", axpy, xpay, dotu, dotc, csr_matvec, linear2_step};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace ntfd::kernels
