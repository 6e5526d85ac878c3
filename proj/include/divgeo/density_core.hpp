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
#include <complex>

#include "divgeo/errors.hpp"

namespace divgeo::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigenvalues at or below this magnitude count as zero for support and
/// logarithm purposes. Double-precision eigensolvers routinely report tiny
/// negatives for semidefinite input; those clamp to zero at construction.
inline constexpr double kEigenvalueThreshold = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
/// Support containment uses the projector criterion
/// ||(I - P_rho) P_sigma|| <= this bound (spectral norm).
inline constexpr double kSupportProjectorTolerance = 1e-8;
inline constexpr double kBasisGramTolerance = 1e-10;

/// Square complex matrix checked to be self-adjoint within 1e-12.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix with its
/// eigendecomposition computed once at construction. Eigenvalues are stored
/// ascending with values at or below kEigenvalueThreshold clamped to zero.
/// Immutable after construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// Orthonormal eigenvectors as columns, ordered like eigenvalues().
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }

  /// Orthogonal projector onto the span of eigenvectors with eigenvalue
  /// above the threshold.
  Matrix support_projector(double threshold = kEigenvalueThreshold) const;

 private:
  Matrix entries_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

/// Result of the support containment check between two states.
struct SupportRelation {
  bool contained;
  double threshold;
};

/// Rank-one state |psi><psi| from a nonzero vector; normalizes internally.
DensityMatrix pure_state(const Vector& psi);

/// Conditional expectation onto the diagonal subalgebra of the standard
/// basis: keeps <n|B|n> on the diagonal, zeroes everything else.
Matrix diag_conditional(const Matrix& B);

/// Same map in a caller-supplied orthonormal basis (columns of `basis`);
/// the result is expressed back in the standard basis. Throws
/// NonOrthonormalBasis when the Gram matrix deviates from the identity by
/// more than kBasisGramTolerance.
Matrix diag_conditional(const Matrix& B, const Matrix& basis);

/// The diagonal part of a density matrix is again a density matrix.
DensityMatrix diag_conditional(const DensityMatrix& rho);

/// Checks whether the support of sigma is contained in the support of rho.
SupportRelation support_relation(const DensityMatrix& sigma,
                                 const DensityMatrix& rho,
                                 double threshold = kEigenvalueThreshold);

/// Quantum relative entropy Tr sigma ln sigma - Tr sigma ln rho, computed in
/// the eigenbases of the arguments with the 0 ln 0 = 0 convention. Throws
/// SupportViolation when the support of sigma is not contained in the
/// support of rho (the divergence is +infinity there).
double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho);

/// Spectral logarithm restricted to the support: sum over eigenvalues above
/// the threshold of ln(lambda) times the eigenprojector; zero on the kernel.
HermitianOperator matrix_log_on_support(const DensityMatrix& rho);

}  // namespace divgeo::quantum
