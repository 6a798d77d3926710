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

// Per-step trajectory rows and their CSV encoding.

#ifndef TILTRL_TRAJECTORY_LOG_H_
#define TILTRL_TRAJECTORY_LOG_H_

#include <ostream>
#include <string>

#include "tiltrl/environment.h"

namespace tiltrl {

struct TrajectoryRow {
  int segment = 0;
  int step = 0;
  double time = 0.0;  // s since the start of the run
  RobotState state;
  TargetPose target;
  Action action{};
  Array4 joint_targets{};  // applied (post-delay)
  Array4 thrusts{};        // applied (post-delay)
  RewardBreakdown reward;
  double position_error = 0.0;     // m
  double orientation_error = 0.0;  // rad, norm of the wrapped Euler error
};

// Fills a row from an environment right after env.Step(action).
TrajectoryRow CaptureRow(const TiltEnv& env, const Action& action,
                         const StepResult& result, int segment, double time);

// Column names, comma separated, no trailing newline. Columns:
// segment, step, time, px..pz, qw..qz, vx..vz (world), wx..wz (body),
// q0..q3, qd0..qd3, target px..pz, target qw..qz, a0..a7, q_cmd0..3,
// f0..f3, one column per reward term, reward_total, position_error,
// orientation_error.
std::string TrajectoryCsvHeader();

// One CSV line without newline; doubles use %.17g so values round-trip.
std::string FormatTrajectoryRow(const TrajectoryRow& row);

// Streams a header followed by rows.
class TrajectoryCsvWriter {
 public:
  explicit TrajectoryCsvWriter(std::ostream* out);
  void Write(const TrajectoryRow& row);

 private:
  std::ostream* out_;
};

}  // namespace tiltrl

#endif  // TILTRL_TRAJECTORY_LOG_H_
