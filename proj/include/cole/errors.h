// Copyright 2026 The COLE Authors
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

#ifndef COLE_ERRORS_H_
#define COLE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cole {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "runtime failure" can catch the two branches
// below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (shape, simplex, finiteness).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A preference graph was requested for fewer than two strategies.
class UndefinedPreference : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Exact enumeration requested above the supported size.
class SizeGuard : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Weighted PageRank on a graph without any positive off-diagonal weight.
class DegenerateGraph : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Non-finite gradient or objective during oracle training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Config validation failure; `key()` names the offending field.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : InvalidInput(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace cole

#endif  // COLE_ERRORS_H_
