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

#include "divgeo/bose_model.hpp"

namespace divgeo::bose {

/// Coordinate labels on the (beta, mu) manifold.
enum class Coord { Beta = 0, Mu = 1 };

/// Symmetric 2x2 metric tensor in (beta, mu) coordinates. For a single-level
/// spectrum the tensor is rank one and positive_definite is false.
struct MetricTensor2 {
  Eigen::Matrix2d entries;
  bool positive_definite;
};

/// Connection coefficients on the model manifold. Every coefficient
/// vanishes except the pair w^mu_{beta mu} = w^mu_{mu beta} = 1/beta;
/// the symmetric completion keeps covariant Hessians symmetric.
struct Connection2 {
  double mu_beta_mu;

  double coeff(Coord a, Coord b, Coord upper) const noexcept {
    const bool lower_pair = (a == Coord::Beta && b == Coord::Mu) ||
                            (a == Coord::Mu && b == Coord::Beta);
    return (upper == Coord::Mu && lower_pair) ? mu_beta_mu : 0.0;
  }
};

/// Metric tensor at a model point,
///   g = sum_j w_j [ (e_j-mu)^2, -beta(e_j-mu); -beta(e_j-mu), beta^2 ]
/// with w_j = e^{beta(e_j-mu)} / (e^{beta(e_j-mu)} - 1)^2. Coincides with
/// the Hessian of the divergence at the projection point of the data.
MetricTensor2 metric(const EnergySpectrum& spectrum, const ModelPoint& point);

/// Closed-form connection at a point; requires beta > 0.
Connection2 connection(const ModelPoint& point);

/// Covariant Hessian of the divergence: H_ab - w^c_ab G_c with H the
/// coordinate Hessian and G the gradient. Independent of the data and equal
/// to the metric tensor.
Eigen::Matrix2d covariant_hessian(const OccupationSequence& data,
                                  const EnergySpectrum& spectrum,
                                  const ModelPoint& point);

}  // namespace divgeo::bose
