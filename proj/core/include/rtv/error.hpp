// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtv {

enum class ErrorKind {
  InvalidArgument,
  InsufficientHistory,
  NonMonotoneTime,
  NonMonotoneStep,
  DegenerateCalibration,
  NonFiniteInput,
  NonConvergence,
  EmptyTrace,
  SinkUnavailable,
  ParseError,
  NotObservable,
  DanglingReference,
  UnknownEstimator,
  UnsupportedStrategy,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace rtv
