// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace ntfd {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// %.17g, so a value round-trips exactly
std::string fmt(double v);
std::string fmt(long v);

std::string to_csv(const CsvTable& t);
void write_csv(const std::string& path, const CsvTable& t);

}  // namespace ntfd
