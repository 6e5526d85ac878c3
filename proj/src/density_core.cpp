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

#include "divgeo/density_core.hpp"

#include <cmath>
#include <string>

namespace divgeo::quantum {

namespace {

void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DomainError(std::string(who) + " must be a square matrix of "
                      "dimension at least 1");
  }
}

void check_hermitian(const Matrix& m, const char* who) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= kHermitianTolerance)) {
    throw DomainError(std::string(who) + " is not Hermitian: max deviation " +
                      std::to_string(dev));
  }
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries)
    : entries_(std::move(entries)) {
  check_square(entries_, "operator");
  check_hermitian(entries_, "operator");
}

DensityMatrix::DensityMatrix(const Matrix& entries) {
  check_square(entries, "density matrix");
  check_hermitian(entries, "density matrix");
  entries_ = 0.5 * (entries + entries.adjoint());

  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigendecomposition of the density matrix failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  const double trace = eigenvalues_.sum();
  if (!(std::abs(trace - 1.0) <= kTraceTolerance)) {
    throw DomainError("density matrix trace must be 1, got " +
                      std::to_string(trace));
  }
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    if (eigenvalues_(i) < -kEigenvalueThreshold) {
      throw DomainError("density matrix has negative eigenvalue " +
                        std::to_string(eigenvalues_(i)));
    }
    if (eigenvalues_(i) <= kEigenvalueThreshold) {
      eigenvalues_(i) = 0.0;
    }
  }
}

Matrix DensityMatrix::support_projector(double threshold) const {
  Matrix p = Matrix::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    if (eigenvalues_(i) > threshold) {
      p.noalias() += eigenvectors_.col(i) * eigenvectors_.col(i).adjoint();
    }
  }
  return p;
}

DensityMatrix pure_state(const Vector& psi) {
  if (psi.size() < 1) {
    throw DomainError("state vector must have dimension at least 1");
  }
  const double norm = psi.stableNorm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw ZeroVector("cannot build a pure state from the zero vector");
  }
  const Vector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

Matrix diag_conditional(const Matrix& B) {
  check_square(B, "conditioned operator");
  return Matrix(B.diagonal().asDiagonal());
}

Matrix diag_conditional(const Matrix& B, const Matrix& basis) {
  check_square(B, "conditioned operator");
  if (basis.rows() != B.rows() || basis.cols() != B.rows()) {
    throw DomainError("basis must be square and match the operator dimension");
  }
  const double gram_dev =
      (basis.adjoint() * basis - Matrix::Identity(basis.rows(), basis.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (!(gram_dev <= kBasisGramTolerance)) {
    throw NonOrthonormalBasis("basis Gram matrix deviates from identity by " +
                              std::to_string(gram_dev));
  }
  const Matrix in_basis = basis.adjoint() * B * basis;
  return basis * in_basis.diagonal().asDiagonal() * basis.adjoint();
}

DensityMatrix diag_conditional(const DensityMatrix& rho) {
  return DensityMatrix(diag_conditional(rho.matrix()));
}

SupportRelation support_relation(const DensityMatrix& sigma,
                                 const DensityMatrix& rho, double threshold) {
  if (sigma.dim() != rho.dim()) {
    throw DomainError("states must share the same dimension");
  }
  const Matrix p_sigma = sigma.support_projector(threshold);
  const Matrix p_rho = rho.support_projector(threshold);
  const Matrix leak =
      (Matrix::Identity(rho.dim(), rho.dim()) - p_rho) * p_sigma;
  const double norm = leak.jacobiSvd().singularValues()(0);
  return SupportRelation{norm <= kSupportProjectorTolerance, threshold};
}

double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (sigma.dim() != rho.dim()) {
    throw DomainError("states must share the same dimension");
  }
  if (!support_relation(sigma, rho).contained) {
    throw SupportViolation(
        "support of sigma is not contained in the support of rho; the "
        "relative entropy is +infinity");
  }
  double sigma_term = 0.0;
  for (Eigen::Index i = 0; i < sigma.eigenvalues().size(); ++i) {
    const double lambda = sigma.eigenvalues()(i);
    if (lambda > 0.0) {
      sigma_term += lambda * std::log(lambda);
    }
  }
  // <u_j| sigma |u_j> in rho's eigenbasis; kernel directions carry no
  // sigma weight once the support check has passed.
  const Matrix overlap =
      rho.eigenvectors().adjoint() * sigma.matrix() * rho.eigenvectors();
  double cross_term = 0.0;
  for (Eigen::Index j = 0; j < rho.eigenvalues().size(); ++j) {
    const double m = rho.eigenvalues()(j);
    if (m > 0.0) {
      cross_term += overlap(j, j).real() * std::log(m);
    }
  }
  return sigma_term - cross_term;
}

HermitianOperator matrix_log_on_support(const DensityMatrix& rho) {
  Eigen::VectorXd logs = Eigen::VectorXd::Zero(rho.dim());
  for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
    const double lambda = rho.eigenvalues()(i);
    logs(i) = lambda > 0.0 ? std::log(lambda) : 0.0;
  }
  const Matrix log_m = rho.eigenvectors() *
                       logs.cast<Complex>().asDiagonal() *
                       rho.eigenvectors().adjoint();
  return HermitianOperator(0.5 * (log_m + log_m.adjoint()));
}

}  // namespace divgeo::quantum
