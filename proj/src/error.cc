// Copyright 2026 The tiltrl Authors
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

#include "tiltrl/error.h"

#include <string>

namespace tiltrl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kDegenerateInput:
      return "DegenerateInput";
    case ErrorCode::kOutOfRangeThrust:
      return "OutOfRangeThrust";
    case ErrorCode::kNonFiniteState:
      return "NonFiniteState";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kUnreachable:
      return "Unreachable";
    case ErrorCode::kNonFiniteLoss:
      return "NonFiniteLoss";
    case ErrorCode::kRankDeficient:
      return "RankDeficient";
    case ErrorCode::kInsufficientData:
      return "InsufficientData";
    case ErrorCode::kNoConvergence:
      return "NoConvergence";
    case ErrorCode::kCheckpointMismatch:
      return "CheckpointMismatch";
    case ErrorCode::kIo:
      return "Io";
    case ErrorCode::kParse:
      return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace tiltrl
