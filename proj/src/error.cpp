// Copyright 2026 The layerfid Authors
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

#include "layerfid/error.hpp"

namespace lfd {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidDimension: return "InvalidDimension";
  case ErrorCode::NonUnitary: return "NonUnitary";
  case ErrorCode::InvalidTargets: return "InvalidTargets";
  case ErrorCode::NotCPTP: return "NotCPTP";
  case ErrorCode::InvalidConfusion: return "InvalidConfusion";
  case ErrorCode::InvalidCalibration: return "InvalidCalibration";
  case ErrorCode::EdgeNotInSnapshot: return "EdgeNotInSnapshot";
  case ErrorCode::RoutingRequired: return "RoutingRequired";
  case ErrorCode::NoEmbedding: return "NoEmbedding";
  case ErrorCode::EmptySweep: return "EmptySweep";
  case ErrorCode::ReferenceMismatch: return "ReferenceMismatch";
  case ErrorCode::MalformedSnapshot: return "MalformedSnapshot";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace lfd
