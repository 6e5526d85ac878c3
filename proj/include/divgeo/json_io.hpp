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

#include <json.hpp>
#include <optional>
#include <vector>

#include "divgeo/bose_geometry.hpp"
#include "divgeo/bose_model.hpp"
#include "divgeo/quantum_model.hpp"
#include "divgeo/weak_measurement.hpp"

// JSON wire formats. Structural problems (missing keys, wrong types,
// inconsistent shapes) raise ParseError; domain invariants are enforced by
// the domain types themselves when the caller constructs them.
//
//   complex matrix   {"dim": d, "re": [[..]], "im": [[..]]}   row-major
//   complex vector   {"re": [..], "im": [..]}
//   bose data        {"spectrum": [..], "occupations": [..], "beta": b,
//                     "mu": m}                (occupations/beta/mu optional)
//   model            {"dim": d, "generators": [<matrix>..], "theta": [..]}
//                                             (theta optional)
//   selection        {"pre": <vector>, "post": <vector>}

namespace divgeo::io {

using json = nlohmann::json;

json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const json& j);

json matrix2_to_json(const Eigen::Matrix2d& m);
Eigen::Matrix2d matrix2_from_json(const json& j);

struct BoseInput {
  std::vector<double> spectrum;
  std::optional<std::vector<double>> occupations;
  std::optional<double> beta;
  std::optional<double> mu;
};

BoseInput bose_input_from_json(const json& j);
json bose_input_to_json(const BoseInput& input);

json fit_report_to_json(const bose::FitReport& report);
bose::FitReport fit_report_from_json(const json& j);

json geometry_report_to_json(const bose::MetricTensor2& g,
                             const bose::Connection2& w,
                             const Eigen::Matrix2d& covariant_hessian);

struct ModelInput {
  Eigen::Index dim;
  std::vector<Eigen::MatrixXcd> generators;
  std::optional<Eigen::VectorXd> theta;
};

ModelInput model_from_json(const json& j);
json model_to_json(const ModelInput& input);

json projection_report_to_json(const quantum::ProjectionReport& report);

json pythagoras_to_json(const quantum::PythagorasCheck& check);

json border_samples_to_json(const std::vector<quantum::BorderSample>& rows);

json amplification_to_json(const std::vector<weak::AmplificationSample>& rows);

struct SelectionInput {
  Eigen::VectorXcd pre;
  Eigen::VectorXcd post;
};

SelectionInput selection_from_json(const json& j);

}  // namespace divgeo::io
