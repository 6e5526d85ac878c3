// Copyright 2026 The divgeo authors.
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

#pragma once

#include <cmath>
#include <string>

#include "divgeo/bose_model.hpp"

namespace divgeo::bose::internal {

// Per-point sums over the spectrum. With x_j = beta * (e_j - mu):
//   f_j = 1 / (e^{x_j} - 1)            mean occupation
//   w_j = e^{x_j} / (e^{x_j} - 1)^2    = f_j (1 + f_j)
// Everything is evaluated through q = e^{-x} and expm1 so large and small
// x_j stay accurate.
struct ModeSums {
  double log_z = 0.0;
  double f_total = 0.0;    // sum f_j
  double df_total = 0.0;   // sum (e_j - mu) f_j
  double w_total = 0.0;    // sum w_j
  double dw_total = 0.0;   // sum (e_j - mu) w_j
  double d2w_total = 0.0;  // sum (e_j - mu)^2 w_j
};

inline void validate_point(const EnergySpectrum& spectrum,
                           const ModelPoint& point) {
  if (!(point.beta > 0.0)) {
    throw DomainError("beta must be positive, got " +
                      std::to_string(point.beta));
  }
  if (!(point.mu < spectrum.min_level())) {
    throw DomainError("mu must lie strictly below the lowest level " +
                      std::to_string(spectrum.min_level()) + ", got " +
                      std::to_string(point.mu));
  }
}

inline void check_same_length(const OccupationSequence& data,
                              const EnergySpectrum& spectrum) {
  if (data.size() != spectrum.size()) {
    throw LengthMismatch("occupation sequence has " +
                         std::to_string(data.size()) +
                         " entries but the spectrum has " +
                         std::to_string(spectrum.size()));
  }
}

inline ModeSums accumulate(const EnergySpectrum& spectrum,
                           const ModelPoint& point) {
  ModeSums s;
  for (double level : spectrum.levels()) {
    const double gap = level - point.mu;  // > 0 on the open domain
    const double x = point.beta * gap;
    const double one_minus_q = -std::expm1(-x);  // 1 - e^{-x} in (0, 1]
    const double q = std::exp(-x);
    const double f = q / one_minus_q;
    const double w = q / (one_minus_q * one_minus_q);
    s.log_z -= std::log(one_minus_q);
    s.f_total += f;
    s.df_total += gap * f;
    s.w_total += w;
    s.dw_total += gap * w;
    s.d2w_total += gap * gap * w;
  }
  return s;
}

}  // namespace divgeo::bose::internal
