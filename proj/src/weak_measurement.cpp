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

#include "divgeo/weak_measurement.hpp"

#include <cmath>

namespace divgeo::weak {

PrePostSelection::PrePostSelection(const Vector& pre, const Vector& post) {
  if (pre.size() != post.size()) {
    throw LengthMismatch("pre and post selected vectors must share dimension");
  }
  if (pre.size() < 1) {
    throw DomainError("selection vectors must have dimension at least 1");
  }
  const double pre_norm = pre.stableNorm();
  const double post_norm = post.stableNorm();
  if (pre_norm == 0.0 || !std::isfinite(pre_norm)) {
    throw ZeroVector("pre-selected vector is zero");
  }
  if (post_norm == 0.0 || !std::isfinite(post_norm)) {
    throw ZeroVector("post-selected vector is zero");
  }
  pre_ = pre / pre_norm;
  post_ = post / post_norm;
  // <post|pre> from the raw vectors: normalizing first and then taking the
  // inner product loses relative accuracy when the overlap is small.
  overlap_ = post.dot(pre) / (pre_norm * post_norm);
}

WeakValueResult weak_value(const PrePostSelection& selection,
                           const HermitianOperator& op,
                           const WeakValueOptions& options) {
  if (op.dim() != selection.dim()) {
    throw DomainError("operator dimension must match the selection");
  }
  const double overlap_mag = std::abs(selection.overlap());
  if (overlap_mag < options.overlap_floor || overlap_mag == 0.0) {
    throw OrthogonalSelection(
        "pre and post selected states are orthogonal; the weak value is "
        "undefined");
  }
  const Complex numerator =
      selection.post().dot(op.matrix() * selection.pre());
  return WeakValueResult{numerator / selection.overlap(),
                         selection.overlap_probability()};
}

std::vector<AmplificationSample> amplification_scan(
    const std::function<PrePostSelection(double)>& family,
    const HermitianOperator& op, const std::vector<double>& eps_values) {
  std::vector<AmplificationSample> rows;
  rows.reserve(eps_values.size());
  for (double eps : eps_values) {
    const WeakValueResult wv = weak_value(family(eps), op);
    rows.push_back(AmplificationSample{eps, std::abs(wv.value),
                                       wv.overlap_probability});
  }
  return rows;
}

}  // namespace divgeo::weak
