// Copyright 2026 The QLV Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qlv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (bad index, N < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Requested object would exceed the configured qubit limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// An invariant of a domain object does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's contract (e.g. fidelity against a mixed reference).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Protocol steps invoked out of order.
class ProtocolOrderError : public Error {
 public:
  using Error::Error;
};

/// Not enough unconsumed entangled pairs left for a protocol step.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A message references a consumed or unknown pair label.
class ProtocolCorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlv
