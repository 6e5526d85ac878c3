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

#include <stdexcept>
#include <string>
#include <utility>

namespace divgeo {

/// Base of all computation-domain failures. kind() is a stable,
/// machine-readable tag; the CLI maps any Error to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("DomainError", w) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& w) : Error("LengthMismatch", w) {}
};

struct Unidentifiable : Error {
  explicit Unidentifiable(const std::string& w) : Error("Unidentifiable", w) {}
};

struct NoInteriorMinimum : Error {
  explicit NoInteriorMinimum(const std::string& w)
      : Error("NoInteriorMinimum", w) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& w) : Error("NoConvergence", w) {}
};

struct ZeroVector : Error {
  explicit ZeroVector(const std::string& w) : Error("ZeroVector", w) {}
};

struct NonOrthonormalBasis : Error {
  explicit NonOrthonormalBasis(const std::string& w)
      : Error("NonOrthonormalBasis", w) {}
};

struct SupportViolation : Error {
  explicit SupportViolation(const std::string& w)
      : Error("SupportViolation", w) {}
};

struct OrthogonalSelection : Error {
  explicit OrthogonalSelection(const std::string& w)
      : Error("OrthogonalSelection", w) {}
};

struct IllConditionedModel : Error {
  explicit IllConditionedModel(const std::string& w)
      : Error("IllConditionedModel", w) {}
};

/// Structural problems in input data (bad JSON shape, missing keys,
/// wrong element types). The CLI maps ParseError to exit code 1.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace divgeo
