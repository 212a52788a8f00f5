// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntfd/thermal_space.hpp"

namespace ntfd {

// 16-byte header {"NTFD", version u32, dim u32, kind u32}, then little-endian
// float64 (re, im) pairs; operators are dense and row-major.
enum class ArrayKind : std::uint32_t { op = 0, ket = 1, bra = 2 };

inline constexpr std::uint32_t kFormatVersion = 1;

struct ComplexArray {
  ArrayKind kind = ArrayKind::op;
  std::uint32_t dim = 0;
  std::vector<cd> data;
};

std::vector<unsigned char> encode(const ComplexArray& a);
ComplexArray decode(const std::vector<unsigned char>& bytes);

ComplexArray to_array(const ThermalOperator& A);
ComplexArray to_array(const ThermalKet& k);
ComplexArray to_array(const ThermalBra& b);

void write_array(const std::string& path, const ComplexArray& a);
ComplexArray read_array(const std::string& path);

}  // namespace ntfd
