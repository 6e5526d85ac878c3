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

#include "divgeo/bose_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bose_internal.hpp"
#include "divgeo/bose_geometry.hpp"

namespace divgeo::bose {

using internal::ModeSums;

EnergySpectrum::EnergySpectrum(std::vector<double> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw DomainError("spectrum must contain at least one level");
  }
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (!std::isfinite(levels_[j])) {
      throw DomainError("spectrum levels must be finite");
    }
    if (j > 0 && !(levels_[j - 1] < levels_[j])) {
      throw DomainError("spectrum levels must be strictly increasing");
    }
  }
}

OccupationSequence::OccupationSequence(std::vector<double> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw DomainError("occupation sequence must be non-empty");
  }
  for (double c : counts_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw DomainError("occupations must be finite and non-negative");
    }
  }
}

double OccupationSequence::total() const noexcept {
  double sum = 0.0;
  for (double c : counts_) sum += c;
  return sum;
}

double log_partition(const EnergySpectrum& spectrum, const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  return internal::accumulate(spectrum, point).log_z;
}

std::vector<double> occupation(const EnergySpectrum& spectrum,
                               const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  std::vector<double> f;
  f.reserve(spectrum.size());
  for (double level : spectrum.levels()) {
    const double x = point.beta * (level - point.mu);
    const double q = std::exp(-x);
    f.push_back(q / (-std::expm1(-x)));
  }
  return f;
}

double divergence(const OccupationSequence& data,
                  const EnergySpectrum& spectrum, const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  internal::check_same_length(data, spectrum);
  double data_term = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    data_term += data.count(j) * (spectrum.level(j) - point.mu);
  }
  return internal::accumulate(spectrum, point).log_z + point.beta * data_term;
}

double log_pmf(const OccupationSequence& data, const EnergySpectrum& spectrum,
               const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  internal::check_same_length(data, spectrum);
  double energy = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    energy += spectrum.level(j) * data.count(j);
    total += data.count(j);
  }
  return -internal::accumulate(spectrum, point).log_z -
         point.beta * energy + point.beta * point.mu * total;
}

Eigen::Vector2d divergence_gradient(const OccupationSequence& data,
                                    const EnergySpectrum& spectrum,
                                    const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  internal::check_same_length(data, spectrum);
  const ModeSums s = internal::accumulate(spectrum, point);
  double gap_weighted = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    gap_weighted += data.count(j) * (spectrum.level(j) - point.mu);
    total += data.count(j);
  }
  Eigen::Vector2d g;
  g(0) = gap_weighted - s.df_total;
  g(1) = point.beta * (s.f_total - total);
  return g;
}

Eigen::Matrix2d divergence_hessian(const OccupationSequence& data,
                                   const EnergySpectrum& spectrum,
                                   const ModelPoint& point) {
  internal::validate_point(spectrum, point);
  internal::check_same_length(data, spectrum);
  const ModeSums s = internal::accumulate(spectrum, point);
  const double total = data.total();
  Eigen::Matrix2d h;
  h(0, 0) = s.d2w_total;
  h(0, 1) = (s.f_total - total) - point.beta * s.dw_total;
  h(1, 0) = h(0, 1);
  h(1, 1) = point.beta * point.beta * s.w_total;
  return h;
}

namespace {

// The solver works in z = (x, y) with beta = e^x and mu = e_1 - e^y, which
// maps the open parameter domain onto the plane. Coordinates are clamped to
// keep every exponential finite.
constexpr double kCoordinateLimit = 60.0;
constexpr double kMaxStep = 10.0;

double clamp_coord(double v) {
  return std::clamp(v, -kCoordinateLimit, kCoordinateLimit);
}

struct SolverEval {
  double value;
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
  ModelPoint point;
};

SolverEval evaluate(const EnergySpectrum& spectrum, double base_gap_weight,
                    double total, double x, double y) {
  const double eps1 = spectrum.min_level();
  const double beta = std::exp(x);
  const double t = std::exp(y);
  const ModelPoint point{beta, eps1 - t};
  const ModeSums s = internal::accumulate(spectrum, point);

  // sum_j n_j (e_j - mu) = sum_j n_j (e_j - e_1) + t * sum_j n_j
  const double gap_weighted = base_gap_weight + t * total;
  const double g_beta = gap_weighted - s.df_total;
  const double g_mu = beta * (s.f_total - total);
  const double h_bb = s.d2w_total;
  const double h_bm = (s.f_total - total) - beta * s.dw_total;
  const double h_mm = beta * beta * s.w_total;

  SolverEval e;
  e.value = s.log_z + beta * gap_weighted;
  e.grad(0) = beta * g_beta;
  e.grad(1) = -t * g_mu;
  e.hess(0, 0) = e.grad(0) + beta * beta * h_bb;
  e.hess(0, 1) = -beta * t * h_bm;
  e.hess(1, 0) = e.hess(0, 1);
  e.hess(1, 1) = e.grad(1) + t * t * h_mm;
  e.point = point;
  return e;
}

// Newton direction, with a Levenberg shift when the transformed Hessian is
// indefinite and a plain gradient step as the last resort.
Eigen::Vector2d descent_direction(const Eigen::Matrix2d& h,
                                  const Eigen::Vector2d& g) {
  Eigen::Matrix2d m = h;
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double eig_min = tr / 2.0 - disc;
  if (!(eig_min > 0.0)) {
    const double shift = -eig_min + 1e-8 * (1.0 + std::abs(tr));
    m(0, 0) += shift;
    m(1, 1) += shift;
  }
  const double mdet = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Vector2d d;
  if (mdet != 0.0 && std::isfinite(mdet)) {
    d(0) = -(m(1, 1) * g(0) - m(0, 1) * g(1)) / mdet;
    d(1) = -(-m(1, 0) * g(0) + m(0, 0) * g(1)) / mdet;
  } else {
    d = -g;
  }
  if (!d.allFinite() || d.dot(g) >= 0.0) {
    d = -g;
  }
  const double linf = d.cwiseAbs().maxCoeff();
  if (linf > kMaxStep) {
    d *= kMaxStep / linf;
  }
  return d;
}

double initial_log_beta(const EnergySpectrum& spectrum, double mu0,
                        double total) {
  const auto occupancy = [&](double x) {
    return internal::accumulate(spectrum, ModelPoint{std::exp(x), mu0})
        .f_total;
  };
  double lo = -30.0;
  double hi = 30.0;
  if (occupancy(lo) <= total) return lo;
  if (occupancy(hi) >= total) return hi;
  for (int i = 0; i < 80; ++i) {  // total occupancy is decreasing in beta
    const double mid = 0.5 * (lo + hi);
    (occupancy(mid) > total ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FitReport fit(const OccupationSequence& data, const EnergySpectrum& spectrum,
              const FitOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw DomainError("fit tolerance must be positive");
  }
  internal::check_same_length(data, spectrum);
  if (spectrum.size() < 2) {
    throw Unidentifiable(
        "a single energy level gives dependent moment equations; beta and mu "
        "cannot be separated");
  }

  const double total = data.total();
  if (!(total > 0.0)) {
    throw NoInteriorMinimum(
        "all occupations are zero; the divergence infimum lies on the "
        "boundary of the parameter domain");
  }
  double energy = 0.0;
  double level_sum = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    energy += data.count(j) * spectrum.level(j);
    level_sum += spectrum.level(j);
  }
  const double mean = energy / total;
  const double level_mean = level_sum / static_cast<double>(spectrum.size());
  if (!(mean > spectrum.min_level()) || !(mean < level_mean)) {
    throw NoInteriorMinimum(
        "data mean energy " + std::to_string(mean) +
        " is outside the open interval (" +
        std::to_string(spectrum.min_level()) + ", " +
        std::to_string(level_mean) + ") attainable by the model");
  }

  const double eps1 = spectrum.min_level();
  double base_gap_weight = 0.0;  // sum_j n_j (e_j - e_1)
  for (std::size_t j = 0; j < data.size(); ++j) {
    base_gap_weight += data.count(j) * (spectrum.level(j) - eps1);
  }

  const double t0 = spectrum.level(1) - eps1;
  double y = clamp_coord(std::log(t0));
  double x = clamp_coord(initial_log_beta(spectrum, eps1 - t0, total));

  SolverEval e = evaluate(spectrum, base_gap_weight, total, x, y);
  int iterations = 0;
  bool converged = false;
  for (; iterations < options.max_iterations; ++iterations) {
    if (e.grad.norm() <= options.tolerance) {
      converged = true;
      break;
    }
    Eigen::Vector2d dir = descent_direction(e.hess, e.grad);
    bool moved = false;
    for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
      const double slope = e.grad.dot(dir);
      const double gnorm = e.grad.norm();
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        const double nx = clamp_coord(x + alpha * dir(0));
        const double ny = clamp_coord(y + alpha * dir(1));
        const SolverEval trial =
            evaluate(spectrum, base_gap_weight, total, nx, ny);
        // Near the solution the divergence decrease drops below one ulp
        // and cannot certify progress; the moment-equation residual can,
        // so a shrinking gradient norm is accepted as well.
        const bool value_ok = std::isfinite(trial.value) &&
                              trial.value < e.value + 1e-4 * alpha * slope;
        const bool residual_ok =
            trial.grad.allFinite() &&
            trial.grad.norm() <= (1.0 - 1e-4 * alpha) * gnorm;
        if (value_ok || residual_ok) {
          x = nx;
          y = ny;
          e = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        dir = -e.grad;  // retry along steepest descent
        const double linf = dir.cwiseAbs().maxCoeff();
        if (linf > 1.0) dir /= linf;
      }
    }
    if (!moved) {
      throw NoConvergence(
          "line search cannot reduce the divergence or its gradient; the "
          "minimizer may sit at the boundary of the domain");
    }
  }
  if (!converged) {
    throw NoConvergence("fit did not reach tolerance within " +
                        std::to_string(options.max_iterations) +
                        " iterations");
  }

  // One undamped polish step sharpens the solution to machine precision.
  {
    const Eigen::Vector2d dir = descent_direction(e.hess, e.grad);
    const SolverEval trial = evaluate(spectrum, base_gap_weight, total,
                                      clamp_coord(x + dir(0)),
                                      clamp_coord(y + dir(1)));
    if (trial.grad.allFinite() && trial.grad.norm() < e.grad.norm()) {
      x = clamp_coord(x + dir(0));
      y = clamp_coord(y + dir(1));
      e = trial;
    }
  }

  FitReport report{e.point, e.value, iterations, e.grad.norm(),
                   metric(spectrum, e.point).entries};
  return report;
}

OccupationSequence sample_occupations(const EnergySpectrum& spectrum,
                                      const ModelPoint& point,
                                      std::uint64_t seed, int draws) {
  internal::validate_point(spectrum, point);
  if (draws < 1) {
    throw DomainError("draws must be at least 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> sums(spectrum.size(), 0.0);
  for (int d = 0; d < draws; ++d) {
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
      const double x = point.beta * (spectrum.level(j) - point.mu);
      // Inverse CDF of the geometric law with ln q = -x, from one uniform
      // variate in [0, 1).
      const double u =
          static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double k = std::floor(std::log1p(-u) / (-x));
      sums[j] += k;
    }
  }
  for (double& v : sums) v /= static_cast<double>(draws);
  return OccupationSequence(std::move(sums));
}

}  // namespace divgeo::bose
