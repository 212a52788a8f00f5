// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>

namespace ntfd::kernels {

using cd = std::complex<double>;

// Complex arrays are interleaved (re, im) pairs, i.e. std::complex<double>.
struct Table {
  const char* name;
  // y += alpha * x
  void (*axpy)(std::size_t n, cd alpha, const cd* x, cd* y);
  // out = x + alpha * y
  void (*xpay)(std::size_t n, const cd* x, cd alpha, const cd* y, cd* out);
  // sum x[i] * y[i]
  cd (*dotu)(std::size_t n, const cd* x, const cd* y);
  // sum conj(x[i]) * y[i]
  cd (*dotc)(std::size_t n, const cd* x, const cd* y);
  // y = A x for a row-major CSR matrix
  void (*csr_matvec)(std::size_t rows, const int* outer, const int* inner,
                     const cd* values, const cd* x, cd* y);
  // One Euler-Maruyama step for a batch of two-component linear SDEs:
  //   (y0, y1) += dt * D (y0, y1) + (w0, w1),  D row-major 2x2.
  void (*linear2_step)(std::size_t n, const cd* D, double dt, cd* y0, cd* y1,
                       const cd* w0, const cd* w1);
};

const Table& scalar();
// nullptr when the variant was not compiled in or the CPU lacks the feature.
const Table* avx2();

// The table selected for this process: AVX2 when available unless forced scalar.
const Table& active();
void force_scalar(bool on);

}  // namespace ntfd::kernels
