// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ntfd {

static_assert(std::endian::native == std::endian::little, "serialization assumes a little-endian host");

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::size_t expected_count(ArrayKind k, std::uint32_t dim) {
  return k == ArrayKind::op ? static_cast<std::size_t>(dim) * dim : dim;
}

}  // namespace

std::vector<unsigned char> encode(const ComplexArray& a) {
  if (a.data.size() != expected_count(a.kind, a.dim))
    throw Error(Errc::shape_mismatch, "array length does not match its header");
  std::vector<unsigned char> out{'N', 'T', 'F', 'D'};
  put_u32(out, kFormatVersion);
  put_u32(out, a.dim);
  put_u32(out, static_cast<std::uint32_t>(a.kind));
  const std::size_t off = out.size();
  out.resize(off + a.data.size() * 16);
  std::memcpy(out.data() + off, a.data.data(), a.data.size() * 16);
  return out;
}

ComplexArray decode(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "NTFD", 4) != 0)
    throw Error(Errc::io, "missing NTFD header");
  if (get_u32(bytes.data() + 4) != kFormatVersion) throw Error(Errc::io, "unsupported format version");
  ComplexArray a;
  a.dim = get_u32(bytes.data() + 8);
  const std::uint32_t kind = get_u32(bytes.data() + 12);
  if (kind > 2) throw Error(Errc::io, "unknown array kind");
  a.kind = static_cast<ArrayKind>(kind);
  const std::size_t n = expected_count(a.kind, a.dim);
  if (bytes.size() != 16 + 16 * n) throw Error(Errc::io, "payload length does not match header");
  a.data.resize(n);
  std::memcpy(a.data.data(), bytes.data() + 16, 16 * n);
  return a;
}

ComplexArray to_array(const ThermalOperator& A) {
  ComplexArray a{ArrayKind::op, static_cast<std::uint32_t>(A.space().dim()), {}};
  const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> d = A.dense();
  a.data.assign(d.data(), d.data() + d.size());
  return a;
}

ComplexArray to_array(const ThermalKet& k) {
  return {ArrayKind::ket, static_cast<std::uint32_t>(k.v.size()), {k.v.data(), k.v.data() + k.v.size()}};
}

ComplexArray to_array(const ThermalBra& b) {
  return {ArrayKind::bra, static_cast<std::uint32_t>(b.v.size()), {b.v.data(), b.v.data() + b.v.size()}};
}

void write_array(const std::string& path, const ComplexArray& a) {
  const auto bytes = encode(a);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ComplexArray read_array(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

}  // namespace ntfd
