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

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "divgeo/density_core.hpp"

namespace divgeo::quantum {

/// Gram condition number above which a generator set is rejected as
/// numerically dependent.
inline constexpr double kGramConditionLimit = 1e12;

/// Quantum exponential family rho_theta = e^{-theta^k H_k} / Z(theta) with
/// self-adjoint generators H_k. The Gram matrix of {identity, H_1..H_n}
/// under the trace inner product must be well conditioned, which makes the
/// generators linearly independent and independent of the identity.
class ExponentialFamilyModel {
 public:
  explicit ExponentialFamilyModel(std::vector<HermitianOperator> generators);

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t parameter_count() const noexcept { return generators_.size(); }
  const std::vector<HermitianOperator>& generators() const noexcept {
    return generators_;
  }
  /// Condition number of the Gram matrix of {identity, generators}.
  double gram_condition() const noexcept { return gram_condition_; }

 private:
  std::vector<HermitianOperator> generators_;
  Eigen::Index dim_;
  double gram_condition_;
};

/// Real parameter vector of an exponential family model.
using ThetaPoint = Eigen::VectorXd;

struct ProjectionOptions {
  double gradient_tolerance = 1e-10;
  int max_iterations = 100;
};

struct ProjectionReport {
  ThetaPoint theta_hat;
  DensityMatrix rho_hat;
  /// D(sigma || rho_hat).
  double divergence;
  /// Max over k of |Tr rho_hat H_k - Tr sigma H_k|.
  double moment_residual;
  /// Residual of the Pythagorean decomposition evaluated against the
  /// model origin theta = 0.
  double pythagoras_residual;
  int iterations;
};

/// Both sides of a Pythagorean decomposition. rhs = rhs_first + rhs_second
/// and residual = |lhs - rhs|.
struct PythagorasCheck {
  double lhs;
  double rhs;
  double residual;
  double rhs_first;
  double rhs_second;
};

struct BorderSample {
  double t;
  double divergence;
};

/// ln Z(theta) = ln Tr e^{-theta^k H_k}.
double log_partition(const ExponentialFamilyModel& model,
                     const ThetaPoint& theta);

/// The state e^{-theta^k H_k} / Z(theta); full rank for finite theta.
DensityMatrix state_at(const ExponentialFamilyModel& model,
                       const ThetaPoint& theta);

/// Model expectations Tr(rho_theta H_k) for every generator.
Eigen::VectorXd model_moments(const ExponentialFamilyModel& model,
                              const ThetaPoint& theta);

/// Hessian of ln Z(theta): the Kubo-Mori Gram matrix of the centered
/// generators, assembled in the eigenbasis of theta^k H_k with logarithmic-
/// mean weights c(l_m, l_n) = (l_m - l_n)/(ln l_m - ln l_n), c(l, l) = l.
Eigen::MatrixXd log_partition_hessian(const ExponentialFamilyModel& model,
                                      const ThetaPoint& theta);

/// Orthogonal projection of sigma onto the model manifold: minimizes
/// theta -> D(sigma || rho_theta), a convex function whose gradient is the
/// moment mismatch Tr(sigma H_k) - Tr(rho_theta H_k). Newton steps with the
/// Kubo-Mori Hessian and a backtracking line search; convergence at
/// gradient norm <= options.gradient_tolerance.
ProjectionReport project(const DensityMatrix& sigma,
                         const ExponentialFamilyModel& model,
                         const ProjectionOptions& options = {});

/// Pythagorean decomposition against an arbitrary model point:
/// D(sigma||rho_theta) versus D(sigma||rho_sigma) + D(rho_sigma||rho_theta),
/// with rho_sigma the projection of sigma.
PythagorasCheck pythagoras_model(const DensityMatrix& sigma,
                                 const ExponentialFamilyModel& model,
                                 const ThetaPoint& theta);

/// Conditioning decomposition D(sigma||rho) versus
/// D(sigma||sigma_c) + D(sigma_c||rho) with sigma_c the diagonal part of
/// sigma. Requires rho diagonal in the conditioning basis (standard basis
/// here); throws DomainError otherwise.
PythagorasCheck pythagoras_conditional(const DensityMatrix& sigma,
                                       const DensityMatrix& rho_diagonal);

/// Same decomposition with the conditioning done in a caller-supplied
/// orthonormal basis; rho must be diagonal in that basis.
PythagorasCheck pythagoras_conditional(const DensityMatrix& sigma,
                                       const DensityMatrix& rho_diagonal,
                                       const Matrix& basis);

/// Image of a model point on the conditional manifold: the diagonal part
/// of rho_theta. Has strictly positive diagonal for finite theta.
DensityMatrix conditional_manifold_point(const ExponentialFamilyModel& model,
                                         const ThetaPoint& theta);

/// Divergence D(sigma || path(t)) along a family of diagonal states that
/// approaches the border of the state space. t values must be strictly
/// decreasing; t <= 0 is the excluded border point and raises
/// SupportViolation.
std::vector<BorderSample> border_probe(
    const DensityMatrix& sigma,
    const std::function<DensityMatrix(double)>& path,
    const std::vector<double>& t_values);

/// The stock border family diag(t, (1-t)/(d-1), ..., (1-t)/(d-1)) on (0, 1].
std::function<DensityMatrix(double)> canonical_border_path(Eigen::Index dim);

}  // namespace divgeo::quantum
