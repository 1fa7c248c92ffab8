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

#include "rtv/error.hpp"

namespace rtv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorKind::NonMonotoneStep: return "NonMonotoneStep";
    case ErrorKind::DegenerateCalibration: return "DegenerateCalibration";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::SinkUnavailable: return "SinkUnavailable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotObservable: return "NotObservable";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::UnknownEstimator: return "UnknownEstimator";
    case ErrorKind::UnsupportedStrategy: return "UnsupportedStrategy";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message) {}

}  // namespace rtv
