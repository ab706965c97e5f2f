// Copyright 2026 The dielnoise Authors
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

namespace dielnoise {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Name not present in the material database.
class UnknownMaterialError : public Error {
 public:
  explicit UnknownMaterialError(const std::string& name)
      : Error("unknown material '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Scene geometry violates an invariant (overlap, charge inside a body, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or quadrature did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A function argument is outside the documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace dielnoise
