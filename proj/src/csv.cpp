// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/csv.hpp"

#include <cstdio>
#include <fstream>

#include "ntfd/error.hpp"

namespace ntfd {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(long v) { return std::to_string(v); }

namespace {
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += field(cells[i]);
  }
  out += '\n';
}
}  // namespace

std::string to_csv(const CsvTable& t) {
  std::string out;
  line(out, t.header);
  for (const auto& r : t.rows) line(out, r);
  return out;
}

void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path);
  f << to_csv(t);
}

}  // namespace ntfd
