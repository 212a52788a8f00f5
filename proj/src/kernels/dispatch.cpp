// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ntfd/kernels.hpp"

namespace ntfd::kernels {

#if defined(NTFD_HAVE_AVX2)
const Table* avx2_table();
#endif

namespace {

bool env_forces_scalar() {
  const char* v = std::getenv("NTFD_FORCE_SCALAR");
  return v != nullptr && std::strcmp(v, "0") != 0 && v[0] != '\0';
}

std::atomic<bool> g_force_scalar{env_forces_scalar()};

}  // namespace

const Table* avx2() {
#if defined(NTFD_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  if (!g_force_scalar.load(std::memory_order_relaxed)) {
    if (const Table* t = avx2()) return *t;
  }
  return scalar();
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace ntfd::kernels
