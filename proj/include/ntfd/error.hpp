// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ntfd {

enum class Errc {
  invalid_cutoff,
  negative_occupation,
  negative_kappa,
  negative_nbar,
  nonpositive_parameter,
  nu_out_of_range,
  shape_mismatch,
  unknown_symbol,
  unknown_kind,
  non_commutative_set,
  non_realizable_moments,
  nonlinear_martingale,
  unresolvable_product,
  step_too_large,
  truncation_overflow,
  grid_mismatch,
  off_grid,
  parameter_mismatch,
  config,
  io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ntfd
