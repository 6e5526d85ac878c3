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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "divgeo/errors.hpp"

namespace divgeo::bose {

/// Finite, strictly increasing list of single-mode energies (dimensionless).
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<double> levels);

  std::size_t size() const noexcept { return levels_.size(); }
  double level(std::size_t j) const { return levels_.at(j); }
  double min_level() const noexcept { return levels_.front(); }
  const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  std::vector<double> levels_;
};

/// Per-mode occupation data. Entries are non-negative reals, so both raw
/// integer counts and averaged empirical data are admissible.
class OccupationSequence {
 public:
  explicit OccupationSequence(std::vector<double> counts);

  std::size_t size() const noexcept { return counts_.size(); }
  double count(std::size_t j) const { return counts_.at(j); }
  const std::vector<double>& counts() const noexcept { return counts_; }
  double total() const noexcept;

 private:
  std::vector<double> counts_;
};

/// A point of the two-parameter grand-canonical model manifold.
/// Valid points satisfy beta > 0 and mu below the lowest spectrum level;
/// operations check this against the spectrum they receive.
struct ModelPoint {
  double beta;
  double mu;
};

struct FitOptions {
  /// Absolute tolerance on the gradient in solver coordinates
  /// (log beta, log gap).
  double tolerance = 1e-10;
  int max_iterations = 200;
};

struct FitReport {
  ModelPoint point;
  double divergence_at_min;
  int iterations;
  /// Gradient norm in solver coordinates at the returned point.
  double gradient_norm;
  /// Metric tensor at the returned point, (beta, mu) coordinates.
  Eigen::Matrix2d metric;
};

/// ln Z(beta, mu), the log of the grand-canonical partition function.
double log_partition(const EnergySpectrum& spectrum, const ModelPoint& point);

/// Bose-Einstein mean occupation of every mode, f_j = 1/(e^{beta(e_j-mu)}-1).
std::vector<double> occupation(const EnergySpectrum& spectrum,
                               const ModelPoint& point);

/// Divergence between an occupation sequence and a model point:
/// ln Z(beta, mu) + beta * sum_j n_j (e_j - mu). Minimizing it over the
/// manifold produces the best fit for the data.
double divergence(const OccupationSequence& data,
                  const EnergySpectrum& spectrum, const ModelPoint& point);

/// Log of the model probability of the sequence. Equals -divergence; kept
/// as an independent term-by-term evaluation.
double log_pmf(const OccupationSequence& data, const EnergySpectrum& spectrum,
               const ModelPoint& point);

/// Gradient of divergence(data, .) in (beta, mu) coordinates.
Eigen::Vector2d divergence_gradient(const OccupationSequence& data,
                                    const EnergySpectrum& spectrum,
                                    const ModelPoint& point);

/// Coordinate Hessian of divergence(data, .) in (beta, mu) coordinates.
Eigen::Matrix2d divergence_hessian(const OccupationSequence& data,
                                   const EnergySpectrum& spectrum,
                                   const ModelPoint& point);

/// Fits (beta, mu) to the data by divergence minimization. The stationarity
/// conditions are the moment equations
///   sum_j n_j e_j = sum_j e_j f_j(beta, mu),
///   sum_j n_j     = sum_j f_j(beta, mu).
/// Damped Newton iteration runs in coordinates (ln beta, ln(e_1 - mu)) so
/// the open parameter domain maps onto the whole plane.
///
/// Throws Unidentifiable for a single-level spectrum, NoInteriorMinimum when
/// the moment equations have no solution in the open domain (all-zero data,
/// or mean energy outside the attainable interval), NoConvergence at the
/// iteration cap.
FitReport fit(const OccupationSequence& data, const EnergySpectrum& spectrum,
              const FitOptions& options = {});

/// Draws an occupation sequence from the model: each n_j is geometric with
/// success parameter 1 - e^{-beta(e_j-mu)}. Deterministic under a fixed
/// seed. With draws > 1 the per-mode average over that many independent
/// sequences is returned.
OccupationSequence sample_occupations(const EnergySpectrum& spectrum,
                                      const ModelPoint& point,
                                      std::uint64_t seed, int draws = 1);

}  // namespace divgeo::bose
