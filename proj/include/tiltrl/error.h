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

#ifndef TILTRL_ERROR_H_
#define TILTRL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiltrl {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateInput,
  kOutOfRangeThrust,
  kNonFiniteState,
  kOutOfRange,
  kUnreachable,
  kNonFiniteLoss,
  kRankDeficient,
  kInsufficientData,
  kNoConvergence,
  kCheckpointMismatch,
  kIo,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; the code
// identifies the failure class named by each operation's contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tiltrl

#endif  // TILTRL_ERROR_H_
