// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/kernels.hpp"

namespace ntfd::kernels {
namespace {

// Spelled out so the operation order matches the vector variants exactly.
inline void cmul(double ar, double ai, double br, double bi, double& re, double& im) {
  re = ar * br - ai * bi;
  im = ar * bi + ai * br;
}

void axpy(std::size_t n, cd alpha, const cd* x, cd* y) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    cmul(ar, ai, x[i].real(), x[i].imag(), re, im);
    y[i] = cd(y[i].real() + re, y[i].imag() + im);
  }
}

void xpay(std::size_t n, const cd* x, cd alpha, const cd* y, cd* out) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    cmul(ar, ai, y[i].real(), y[i].imag(), re, im);
    out[i] = cd(x[i].real() + re, x[i].imag() + im);
  }
}

cd dotu(std::size_t n, const cd* x, const cd* y) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    cmul(x[i].real(), x[i].imag(), y[i].real(), y[i].imag(), re, im);
    sr += re;
    si += im;
  }
  return {sr, si};
}

cd dotc(std::size_t n, const cd* x, const cd* y) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    cmul(x[i].real(), -x[i].imag(), y[i].real(), y[i].imag(), re, im);
    sr += re;
    si += im;
  }
  return {sr, si};
}

void csr_matvec(std::size_t rows, const int* outer, const int* inner, const cd* values,
                const cd* x, cd* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double sr = 0.0, si = 0.0;
    for (int k = outer[r]; k < outer[r + 1]; ++k) {
      const cd v = values[k];
      const cd u = x[inner[k]];
      double re, im;
      cmul(v.real(), v.imag(), u.real(), u.imag(), re, im);
      sr += re;
      si += im;
    }
    y[r] = cd(sr, si);
  }
}

void linear2_step(std::size_t n, const cd* D, double dt, cd* y0, cd* y1, const cd* w0,
                  const cd* w1) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u0r = y0[i].real(), u0i = y0[i].imag();
    const double u1r = y1[i].real(), u1i = y1[i].imag();
    double ar, ai, br, bi;
    cmul(D[0].real(), D[0].imag(), u0r, u0i, ar, ai);
    cmul(D[1].real(), D[1].imag(), u1r, u1i, br, bi);
    const double f0r = ar + br, f0i = ai + bi;
    cmul(D[2].real(), D[2].imag(), u0r, u0i, ar, ai);
    cmul(D[3].real(), D[3].imag(), u1r, u1i, br, bi);
    const double f1r = ar + br, f1i = ai + bi;
    y0[i] = cd((u0r + dt * f0r) + w0[i].real(), (u0i + dt * f0i) + w0[i].imag());
    y1[i] = cd((u1r + dt * f1r) + w1[i].real(), (u1i + dt * f1i) + w1[i].imag());
  }
}

const Table kScalar{"scalar", axpy, xpay, dotu, dotc, csr_matvec, linear2_step};

}  // namespace

const Table& scalar() { return kScalar; }

}  // namespace ntfd::kernels
