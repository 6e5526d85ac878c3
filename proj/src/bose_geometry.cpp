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

#include "divgeo/bose_geometry.hpp"

#include <cmath>

#include "bose_internal.hpp"

namespace divgeo::bose {

MetricTensor2 metric(const EnergySpectrum& spectrum, const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  const internal::ModeSums s = internal::accumulate(spectrum, point);
  Eigen::Matrix2d g;
  g(0, 0) = s.d2w_total;
  g(0, 1) = -point.beta * s.dw_total;
  g(1, 0) = g(0, 1);
  g(1, 1) = point.beta * point.beta * s.w_total;

  // 2x2 eigenvalues; each mode contributes a rank-one term, so a single
  // level makes the tensor exactly rank one.
  const double tr = g(0, 0) + g(1, 1);
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double eig_min = tr / 2.0 - disc;
  const double eig_max = tr / 2.0 + disc;
  const bool positive_definite = eig_min > 1e-14 * std::max(1.0, eig_max);
  return MetricTensor2{g, positive_definite};
}

Connection2 connection(const ModelPoint& point) {
  if (!(point.beta > 0.0)) {
    throw DomainError("connection requires beta > 0");
  }
  return Connection2{1.0 / point.beta};
}

Eigen::Matrix2d covariant_hessian(const OccupationSequence& data,
                                  const EnergySpectrum& spectrum,
                                  const ModelPoint& point) {
  const Eigen::Matrix2d h = divergence_hessian(data, spectrum, point);
  const Eigen::Vector2d g = divergence_gradient(data, spectrum, point);
  const Connection2 w = connection(point);
  Eigen::Matrix2d correction = Eigen::Matrix2d::Zero();
  correction(0, 1) = w.mu_beta_mu * g(1);
  correction(1, 0) = correction(0, 1);
  return h - correction;
}

}  // namespace divgeo::bose
