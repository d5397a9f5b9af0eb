/**
 * Copyright 2026 The flnoise Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace flnoise {

/// Tensor or vector dimensions disagree with the model or dataset layout.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed on-disk data (IDX files, snapshots, grid-world tables).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A federation round was driven out of protocol: stale broadcast, a client
/// update that does not match the global model, missing strategy state.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid experiment specification.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Client feature marginals differ, so the shared-marginal condition behind
/// the label-noise bound does not hold.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flnoise
