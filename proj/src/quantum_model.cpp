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

#include "divgeo/quantum_model.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace divgeo::quantum {

namespace {

void check_theta(const ExponentialFamilyModel& model, const ThetaPoint& theta) {
  if (static_cast<std::size_t>(theta.size()) != model.parameter_count()) {
    throw LengthMismatch("theta has " + std::to_string(theta.size()) +
                         " entries but the model has " +
                         std::to_string(model.parameter_count()) +
                         " generators");
  }
  if (!theta.allFinite()) {
    throw DomainError("theta entries must be finite");
  }
}

// Eigendata of rho_theta. Logs of the eigenvalues are carried exactly as
// -(a_i - a_min) - ln S so they stay finite even when a lambda underflows.
struct GibbsState {
  Matrix eigenvectors;
  Eigen::VectorXd lambda;
  Eigen::VectorXd log_lambda;
  double log_z;

  Matrix density() const {
    return eigenvectors * lambda.cast<Complex>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

GibbsState gibbs_state(const ExponentialFamilyModel& model,
                       const ThetaPoint& theta) {
  check_theta(model, theta);
  const Eigen::Index d = model.dim();
  Matrix a = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < model.parameter_count(); ++k) {
    a += theta(static_cast<Eigen::Index>(k)) * model.generators()[k].matrix();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigendecomposition of theta^k H_k failed");
  }
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double shift = ev.minCoeff();
  const Eigen::VectorXd scaled = (-(ev.array() - shift)).exp();
  const double sum = scaled.sum();

  GibbsState gs;
  gs.eigenvectors = solver.eigenvectors();
  gs.lambda = scaled / sum;
  gs.log_lambda = -(ev.array() - shift) - std::log(sum);
  gs.log_z = -shift + std::log(sum);
  return gs;
}

Eigen::VectorXd moments_of(const ExponentialFamilyModel& model,
                           const GibbsState& gs) {
  const Matrix rho = gs.density();
  Eigen::VectorXd m(model.parameter_count());
  for (std::size_t k = 0; k < model.parameter_count(); ++k) {
    m(static_cast<Eigen::Index>(k)) =
        (rho * model.generators()[k].matrix()).trace().real();
  }
  return m;
}

// Kubo-Mori Gram matrix of the centered generators in the Gibbs eigenbasis.
Eigen::MatrixXd kubo_mori_hessian(const ExponentialFamilyModel& model,
                                  const GibbsState& gs,
                                  const Eigen::VectorXd& moments) {
  const Eigen::Index d = model.dim();
  const std::size_t n = model.parameter_count();
  std::vector<Matrix> centered(n);
  for (std::size_t k = 0; k < n; ++k) {
    Matrix hk = gs.eigenvectors.adjoint() * model.generators()[k].matrix() *
                gs.eigenvectors;
    hk.diagonal().array() -= moments(static_cast<Eigen::Index>(k));
    centered[k] = std::move(hk);
  }
  Eigen::MatrixXd weights(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index p = 0; p < d; ++p) {
      const double lm = gs.lambda(m);
      const double lp = gs.lambda(p);
      if (std::abs(lm - lp) <= 1e-12 * std::max(lm, lp)) {
        weights(m, p) = 0.5 * (lm + lp);  // removable-singularity limit
      } else {
        weights(m, p) = (lm - lp) / (gs.log_lambda(m) - gs.log_lambda(p));
      }
    }
  }
  Eigen::MatrixXd hess(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      double sum = 0.0;
      for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index p = 0; p < d; ++p) {
          sum += weights(m, p) * (centered[j](m, p) * centered[k](p, m)).real();
        }
      }
      hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = sum;
      hess(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return hess;
}

Eigen::VectorXd state_moments(const DensityMatrix& sigma,
                              const ExponentialFamilyModel& model) {
  if (sigma.dim() != model.dim()) {
    throw DomainError("state and model dimensions differ");
  }
  Eigen::VectorXd m(model.parameter_count());
  for (std::size_t k = 0; k < model.parameter_count(); ++k) {
    m(static_cast<Eigen::Index>(k)) =
        (sigma.matrix() * model.generators()[k].matrix()).trace().real();
  }
  return m;
}

}  // namespace

ExponentialFamilyModel::ExponentialFamilyModel(
    std::vector<HermitianOperator> generators)
    : generators_(std::move(generators)) {
  if (generators_.empty()) {
    throw DomainError("model requires at least one generator");
  }
  dim_ = generators_.front().dim();
  for (const auto& g : generators_) {
    if (g.dim() != dim_) {
      throw DomainError("all generators must share the same dimension");
    }
  }

  // Gram matrix of {identity, H_1..H_n} under <A, B> = Tr(A B).
  const std::size_t n = generators_.size();
  Eigen::MatrixXd gram(n + 1, n + 1);
  gram(0, 0) = static_cast<double>(dim_);
  for (std::size_t j = 0; j < n; ++j) {
    const double tr = generators_[j].matrix().trace().real();
    gram(0, static_cast<Eigen::Index>(j + 1)) = tr;
    gram(static_cast<Eigen::Index>(j + 1), 0) = tr;
    for (std::size_t k = j; k < n; ++k) {
      const double val =
          (generators_[j].matrix() * generators_[k].matrix()).trace().real();
      gram(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(k + 1)) =
          val;
      gram(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(j + 1)) =
          val;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  const double eig_min = solver.eigenvalues().minCoeff();
  const double eig_max = solver.eigenvalues().maxCoeff();
  gram_condition_ = eig_min > 0.0
                        ? eig_max / eig_min
                        : std::numeric_limits<double>::infinity();
  if (!(gram_condition_ < kGramConditionLimit)) {
    throw IllConditionedModel(
        "generators together with the identity are numerically dependent "
        "(Gram condition " +
        std::to_string(gram_condition_) + ")");
  }
}

double log_partition(const ExponentialFamilyModel& model,
                     const ThetaPoint& theta) {
  return gibbs_state(model, theta).log_z;
}

DensityMatrix state_at(const ExponentialFamilyModel& model,
                       const ThetaPoint& theta) {
  return DensityMatrix(gibbs_state(model, theta).density());
}

Eigen::VectorXd model_moments(const ExponentialFamilyModel& model,
                              const ThetaPoint& theta) {
  return moments_of(model, gibbs_state(model, theta));
}

Eigen::MatrixXd log_partition_hessian(const ExponentialFamilyModel& model,
                                      const ThetaPoint& theta) {
  const GibbsState gs = gibbs_state(model, theta);
  return kubo_mori_hessian(model, gs, moments_of(model, gs));
}

ProjectionReport project(const DensityMatrix& sigma,
                         const ExponentialFamilyModel& model,
                         const ProjectionOptions& options) {
  if (!(options.gradient_tolerance > 0.0)) {
    throw DomainError("projection tolerance must be positive");
  }
  const Eigen::VectorXd target = state_moments(sigma, model);
  const Eigen::Index n = static_cast<Eigen::Index>(model.parameter_count());

  // Objective up to the theta-independent entropy of sigma:
  //   F(theta) = theta . target + ln Z(theta), with gradient
  //   target - Tr(rho_theta H_k). Convex, so Newton with backtracking.
  ThetaPoint theta = ThetaPoint::Zero(n);
  GibbsState gs = gibbs_state(model, theta);
  double value = theta.dot(target) + gs.log_z;
  Eigen::VectorXd moments = moments_of(model, gs);
  Eigen::VectorXd grad = target - moments;

  int iterations = 0;
  bool converged = false;
  for (; iterations < options.max_iterations; ++iterations) {
    if (grad.norm() <= options.gradient_tolerance) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd hess = kubo_mori_hessian(model, gs, moments);
    Eigen::VectorXd dir = -hess.ldlt().solve(grad);
    if (!dir.allFinite() || dir.dot(grad) >= 0.0) {
      Eigen::MatrixXd ridged = hess;
      ridged.diagonal().array() += 1e-10 + 1e-10 * hess.diagonal().maxCoeff();
      dir = -ridged.ldlt().solve(grad);
      if (!dir.allFinite() || dir.dot(grad) >= 0.0) {
        throw IllConditionedModel(
            "Kubo-Mori Hessian is numerically singular along the projection "
            "path");
      }
    }
    const double slope = grad.dot(dir);
    const double gnorm = grad.norm();
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const ThetaPoint trial_theta = theta + alpha * dir;
      GibbsState trial = gibbs_state(model, trial_theta);
      const double trial_value = trial_theta.dot(target) + trial.log_z;
      const Eigen::VectorXd trial_grad =
          target - moments_of(model, trial);
      // Accept on objective decrease, or on moment-residual decrease once
      // objective changes fall below double resolution.
      const bool value_ok = std::isfinite(trial_value) &&
                            trial_value < value + 1e-4 * alpha * slope;
      const bool residual_ok = trial_grad.allFinite() &&
                               trial_grad.norm() <= (1.0 - 1e-4 * alpha) * gnorm;
      if (value_ok || residual_ok) {
        theta = trial_theta;
        gs = std::move(trial);
        value = trial_value;
        grad = trial_grad;
        moments = target - grad;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      throw NoConvergence("projection line search stalled");
    }
  }
  if (!converged) {
    throw NoConvergence("projection did not reach tolerance within " +
                        std::to_string(options.max_iterations) +
                        " iterations");
  }

  DensityMatrix rho_hat(gs.density());
  const double divergence = relative_entropy(sigma, rho_hat);

  // Decomposition residual against the model origin.
  const ThetaPoint origin = ThetaPoint::Zero(n);
  const DensityMatrix rho0 = state_at(model, origin);
  const double lhs = relative_entropy(sigma, rho0);
  const double rhs = divergence + relative_entropy(rho_hat, rho0);

  return ProjectionReport{std::move(theta), std::move(rho_hat),   divergence,
                          grad.cwiseAbs().maxCoeff(), std::abs(lhs - rhs),
                          iterations};
}

PythagorasCheck pythagoras_model(const DensityMatrix& sigma,
                                 const ExponentialFamilyModel& model,
                                 const ThetaPoint& theta) {
  const ProjectionReport report = project(sigma, model);
  const DensityMatrix rho_theta = state_at(model, theta);
  const double lhs = relative_entropy(sigma, rho_theta);
  const double first = report.divergence;
  const double second = relative_entropy(report.rho_hat, rho_theta);
  return PythagorasCheck{lhs, first + second, std::abs(lhs - first - second),
                         first, second};
}

PythagorasCheck pythagoras_conditional(const DensityMatrix& sigma,
                                       const DensityMatrix& rho_diagonal) {
  if (sigma.dim() != rho_diagonal.dim()) {
    throw DomainError("states must share the same dimension");
  }
  Matrix off = rho_diagonal.matrix();
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw DomainError(
        "rho must be diagonal in the conditioning basis for the "
        "decomposition to apply");
  }
  const DensityMatrix sigma_c = diag_conditional(sigma);
  const double lhs = relative_entropy(sigma, rho_diagonal);
  const double first = relative_entropy(sigma, sigma_c);
  const double second = relative_entropy(sigma_c, rho_diagonal);
  return PythagorasCheck{lhs, first + second, std::abs(lhs - first - second),
                         first, second};
}

PythagorasCheck pythagoras_conditional(const DensityMatrix& sigma,
                                       const DensityMatrix& rho_diagonal,
                                       const Matrix& basis) {
  if (basis.rows() != sigma.dim() || basis.cols() != sigma.dim()) {
    throw DomainError("basis must be square and match the state dimension");
  }
  const double gram_dev =
      (basis.adjoint() * basis -
       Matrix::Identity(basis.rows(), basis.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (!(gram_dev <= kBasisGramTolerance)) {
    throw NonOrthonormalBasis("basis Gram matrix deviates from identity by " +
                              std::to_string(gram_dev));
  }
  // Rotate into the conditioning basis; relative entropy is invariant under
  // the common unitary.
  const DensityMatrix sigma_rot(basis.adjoint() * sigma.matrix() * basis);
  const DensityMatrix rho_rot(basis.adjoint() * rho_diagonal.matrix() * basis);
  return pythagoras_conditional(sigma_rot, rho_rot);
}

DensityMatrix conditional_manifold_point(const ExponentialFamilyModel& model,
                                         const ThetaPoint& theta) {
  return diag_conditional(state_at(model, theta));
}

std::vector<BorderSample> border_probe(
    const DensityMatrix& sigma,
    const std::function<DensityMatrix(double)>& path,
    const std::vector<double>& t_values) {
  for (std::size_t i = 1; i < t_values.size(); ++i) {
    if (!(t_values[i] < t_values[i - 1])) {
      throw DomainError("t values must be strictly decreasing");
    }
  }
  std::vector<BorderSample> rows;
  rows.reserve(t_values.size());
  for (double t : t_values) {
    if (!(t > 0.0)) {
      throw SupportViolation(
          "t = " + std::to_string(t) +
          " is a border point outside the divergence domain");
    }
    rows.push_back(BorderSample{t, relative_entropy(sigma, path(t))});
  }
  return rows;
}

std::function<DensityMatrix(double)> canonical_border_path(Eigen::Index dim) {
  if (dim < 2) {
    throw DomainError("the border family needs dimension at least 2");
  }
  return [dim](double t) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw DomainError("border path parameter must lie in (0, 1]");
    }
    Eigen::VectorXd diag(dim);
    diag(0) = t;
    diag.tail(dim - 1).setConstant((1.0 - t) / static_cast<double>(dim - 1));
    return DensityMatrix(Matrix(diag.cast<Complex>().asDiagonal()));
  };
}

}  // namespace divgeo::quantum
