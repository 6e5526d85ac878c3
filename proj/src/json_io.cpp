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

#include "divgeo/json_io.hpp"

#include <string>

namespace divgeo::io {

namespace {

const json& require_member(const json& j, const char* key) {
  if (!j.is_object()) {
    throw ParseError("expected a JSON object holding \"" + std::string(key) +
                     "\"");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError("missing required key \"" + std::string(key) + "\"");
  }
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ParseError(where + " must be a number");
  }
  return j.get<double>();
}

std::vector<double> as_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError(where + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    out.push_back(as_number(v, where + " entry"));
  }
  return out;
}

// Parses {"re": [[..]], "im": [[..]]} members of a fixed dim x dim shape.
Eigen::MatrixXd part_from_json(const json& j, Eigen::Index dim,
                               const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    throw ParseError(where + " must be an array of " + std::to_string(dim) +
                     " rows");
  }
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ParseError(where + " rows must hold " + std::to_string(dim) +
                       " numbers");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = as_number(row[static_cast<std::size_t>(c)], where + " entry");
    }
  }
  return m;
}

json part_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXcd& m) {
  return json{{"dim", m.rows()},
              {"re", part_to_json(m.real())},
              {"im", part_to_json(m.imag())}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  const json& dim_j = require_member(j, "dim");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
    throw ParseError("matrix \"dim\" must be a positive integer");
  }
  const Eigen::Index dim = dim_j.get<Eigen::Index>();
  const Eigen::MatrixXd re =
      part_from_json(require_member(j, "re"), dim, "matrix \"re\"");
  const Eigen::MatrixXd im =
      part_from_json(require_member(j, "im"), dim, "matrix \"im\"");
  Eigen::MatrixXcd m(dim, dim);
  m.real() = re;
  m.imag() = im;
  return m;
}

json vector_to_json(const Eigen::VectorXcd& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Eigen::VectorXcd vector_from_json(const json& j) {
  const std::vector<double> re =
      as_number_array(require_member(j, "re"), "vector \"re\"");
  const std::vector<double> im =
      as_number_array(require_member(j, "im"), "vector \"im\"");
  if (re.size() != im.size()) {
    throw ParseError("vector \"re\" and \"im\" must have equal length");
  }
  if (re.empty()) {
    throw ParseError("vector must be non-empty");
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = std::complex<double>{re[i], im[i]};
  }
  return v;
}

json matrix2_to_json(const Eigen::Matrix2d& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}),
                      json::array({m(1, 0), m(1, 1)})});
}

Eigen::Matrix2d matrix2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("expected a 2x2 matrix as two rows");
  }
  Eigen::Matrix2d m;
  for (int r = 0; r < 2; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 2) {
      throw ParseError("2x2 matrix rows must hold two numbers");
    }
    for (int c = 0; c < 2; ++c) {
      m(r, c) = as_number(row[static_cast<std::size_t>(c)], "matrix entry");
    }
  }
  return m;
}

BoseInput bose_input_from_json(const json& j) {
  BoseInput input;
  input.spectrum =
      as_number_array(require_member(j, "spectrum"), "\"spectrum\"");
  if (j.contains("occupations")) {
    input.occupations =
        as_number_array(j.at("occupations"), "\"occupations\"");
  }
  if (j.contains("beta")) {
    input.beta = as_number(j.at("beta"), "\"beta\"");
  }
  if (j.contains("mu")) {
    input.mu = as_number(j.at("mu"), "\"mu\"");
  }
  return input;
}

json bose_input_to_json(const BoseInput& input) {
  json j{{"spectrum", input.spectrum}};
  if (input.occupations) j["occupations"] = *input.occupations;
  if (input.beta) j["beta"] = *input.beta;
  if (input.mu) j["mu"] = *input.mu;
  return j;
}

json fit_report_to_json(const bose::FitReport& report) {
  return json{{"beta", report.point.beta},
              {"mu", report.point.mu},
              {"divergence", report.divergence_at_min},
              {"iterations", report.iterations},
              {"gradient_norm", report.gradient_norm},
              {"metric", matrix2_to_json(report.metric)}};
}

bose::FitReport fit_report_from_json(const json& j) {
  bose::FitReport report;
  report.point.beta = as_number(require_member(j, "beta"), "\"beta\"");
  report.point.mu = as_number(require_member(j, "mu"), "\"mu\"");
  report.divergence_at_min =
      as_number(require_member(j, "divergence"), "\"divergence\"");
  const json& iters = require_member(j, "iterations");
  if (!iters.is_number_integer()) {
    throw ParseError("\"iterations\" must be an integer");
  }
  report.iterations = iters.get<int>();
  report.gradient_norm =
      as_number(require_member(j, "gradient_norm"), "\"gradient_norm\"");
  report.metric = matrix2_from_json(require_member(j, "metric"));
  return report;
}

json geometry_report_to_json(const bose::MetricTensor2& g,
                             const bose::Connection2& w,
                             const Eigen::Matrix2d& covariant_hessian) {
  return json{{"metric", matrix2_to_json(g.entries)},
              {"connection", json{{"mu_beta_mu", w.mu_beta_mu}}},
              {"covariant_hessian", matrix2_to_json(covariant_hessian)}};
}

ModelInput model_from_json(const json& j) {
  ModelInput input;
  const json& dim_j = require_member(j, "dim");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
    throw ParseError("model \"dim\" must be a positive integer");
  }
  input.dim = dim_j.get<Eigen::Index>();
  const json& gens = require_member(j, "generators");
  if (!gens.is_array() || gens.empty()) {
    throw ParseError("model \"generators\" must be a non-empty array");
  }
  for (const auto& g : gens) {
    Eigen::MatrixXcd m = matrix_from_json(g);
    if (m.rows() != input.dim) {
      throw ParseError("generator dimension disagrees with model \"dim\"");
    }
    input.generators.push_back(std::move(m));
  }
  if (j.contains("theta")) {
    const std::vector<double> theta = as_number_array(j.at("theta"),
                                                      "\"theta\"");
    input.theta = Eigen::Map<const Eigen::VectorXd>(
        theta.data(), static_cast<Eigen::Index>(theta.size()));
  }
  return input;
}

json model_to_json(const ModelInput& input) {
  json gens = json::array();
  for (const auto& g : input.generators) {
    gens.push_back(matrix_to_json(g));
  }
  json j{{"dim", input.dim}, {"generators", std::move(gens)}};
  if (input.theta) {
    json theta = json::array();
    for (Eigen::Index i = 0; i < input.theta->size(); ++i) {
      theta.push_back((*input.theta)(i));
    }
    j["theta"] = std::move(theta);
  }
  return j;
}

json projection_report_to_json(const quantum::ProjectionReport& report) {
  json theta = json::array();
  for (Eigen::Index i = 0; i < report.theta_hat.size(); ++i) {
    theta.push_back(report.theta_hat(i));
  }
  return json{{"theta_hat", std::move(theta)},
              {"divergence", report.divergence},
              {"moment_residual", report.moment_residual},
              {"pythagoras_residual", report.pythagoras_residual}};
}

json pythagoras_to_json(const quantum::PythagorasCheck& check) {
  return json{{"lhs", check.lhs},
              {"rhs", check.rhs},
              {"residual", check.residual},
              {"terms", json::array({check.rhs_first, check.rhs_second})}};
}

json border_samples_to_json(const std::vector<quantum::BorderSample>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back(json::array({row.t, row.divergence}));
  }
  return out;
}

json amplification_to_json(
    const std::vector<weak::AmplificationSample>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back(
        json::array({row.epsilon, row.magnitude, row.overlap_probability}));
  }
  return out;
}

SelectionInput selection_from_json(const json& j) {
  return SelectionInput{vector_from_json(require_member(j, "pre")),
                        vector_from_json(require_member(j, "post"))};
}

}  // namespace divgeo::io
