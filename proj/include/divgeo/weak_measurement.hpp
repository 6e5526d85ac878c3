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

#include <functional>
#include <vector>

#include "divgeo/density_core.hpp"

namespace divgeo::weak {

using quantum::Complex;
using quantum::HermitianOperator;
using quantum::Vector;

/// Pre- and post-selected state pair. Both vectors are normalized at
/// construction; the overlap <post|pre> is cached.
class PrePostSelection {
 public:
  PrePostSelection(const Vector& pre, const Vector& post);

  Eigen::Index dim() const noexcept { return pre_.size(); }
  const Vector& pre() const noexcept { return pre_; }
  const Vector& post() const noexcept { return post_; }
  Complex overlap() const noexcept { return overlap_; }
  double overlap_probability() const noexcept { return std::norm(overlap_); }

 private:
  Vector pre_;
  Vector post_;
  Complex overlap_;
};

struct WeakValueResult {
  Complex value;
  double overlap_probability;
};

struct WeakValueOptions {
  /// Selections with |<post|pre>| below this floor count as orthogonal.
  /// The default excludes only the exact zero.
  double overlap_floor = 1e-300;
};

struct AmplificationSample {
  double epsilon;
  double magnitude;
  double overlap_probability;
};

/// The weak value <post|C pre> / <post|pre>, complex in general. Throws
/// OrthogonalSelection when the selection overlap vanishes.
WeakValueResult weak_value(const PrePostSelection& selection,
                           const HermitianOperator& op,
                           const WeakValueOptions& options = {});

/// Tabulates |weak value| and the selection overlap probability along a
/// parametrized family of selections.
std::vector<AmplificationSample> amplification_scan(
    const std::function<PrePostSelection(double)>& family,
    const HermitianOperator& op, const std::vector<double>& eps_values);

}  // namespace divgeo::weak
