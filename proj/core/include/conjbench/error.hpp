// Copyright 2026 The conjbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace conjbench {

// Root of every exception the library throws. Each subclass maps to one
// failure class the CLI reports with its own exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated operation precondition (empty input, out-of-range k, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  DatasetError(std::string message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  // 1-based line of the offending record; 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Chat endpoint failed after retries.
class GatewayError : public Error {
 public:
  using Error::Error;
};

// Replay-only mode found no recorded entry for a request. Never falls back
// to a live call.
class ReplayMiss : public GatewayError {
 public:
  explicit ReplayMiss(const std::string& digest)
      : GatewayError("replay miss for request " + digest), digest_(digest) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

// The Lean toolchain (or an external checker) is missing or broken. Distinct
// from a compile error in the checked file.
class ToolFailure : public Error {
 public:
  using Error::Error;
};

// A health check that must pass before any sampling failed.
class PreflightError : public Error {
 public:
  using Error::Error;
};

class RunError : public Error {
 public:
  using Error::Error;
};

// A report was requested for a run whose store is missing or incomplete.
class IncompleteRun : public Error {
 public:
  using Error::Error;
};

}  // namespace conjbench
