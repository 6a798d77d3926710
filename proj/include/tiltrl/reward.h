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

#ifndef TILTRL_REWARD_H_
#define TILTRL_REWARD_H_

#include <array>
#include <string_view>

#include "tiltrl/dynamics.h"

namespace tiltrl {

enum RewardTerm : int {
  kDesiredPosition = 0,
  kDesiredPose,
  kReachPosition,
  kReachPose,
  kLinearVelocity,
  kAngularVelocity,
  kJointLimitation,
  kThrustLimitation,
  kJointActionRate,
  kThrustActionRate,
  kThrustPower,
  kJointAcceleration,
  kZAxisAlign,
  kThrustAllocation,
  kNumRewardTerms,
};

std::string_view RewardTermName(int term);

using RewardWeights = std::array<double, kNumRewardTerms>;

inline constexpr RewardWeights kDefaultRewardWeights = {
    -1.0, 2.0, 1.0, 0.75, -0.03, -0.05, -0.02,
    -0.01, -5.0e-4, -1.0e-4, -1.0e-5, -1.5e-5, -0.1, -1.0e-5};

struct RewardConfig {
  RewardWeights weights = kDefaultRewardWeights;
  // When true, the thrust limitation term only counts commands above the
  // limit, (f* - f_max)^2 [f* > f_max]. When false the ungated sum is used.
  bool gate_thrust_limit = true;
};

// Everything the reward reads, already reduced to norms where the formulas
// only need norms. Commands are the mapped policy targets before clamping.
struct RewardInputs {
  double position_error = 0.0;     // ||p - p*||, m
  double orientation_error = 0.0;  // ||wrapped Euler difference||, rad
  double linear_speed = 0.0;       // ||v_b||, m/s
  double angular_speed = 0.0;      // ||w_b||, rad/s
  Array4 joint_targets{};
  Array4 prev_joint_targets{};
  Array4 thrust_targets{};
  Array4 prev_thrust_targets{};
  Array4 applied_thrusts{};
  Array4 joint_velocities{};
  Array4 prev_joint_velocities{};
  Vec3 body_z = Vec3::UnitZ();         // world frame
  Vec3 target_body_z = Vec3::UnitZ();  // world frame
  double joint_limit = 3.96;
  double thrust_limit = 20.0;
};

struct RewardBreakdown {
  std::array<double, kNumRewardTerms> terms{};
  RewardWeights weights = kDefaultRewardWeights;
  double total = 0.0;
};

RewardBreakdown ComputeReward(const RewardInputs& in,
                              const RewardConfig& config);

}  // namespace tiltrl

#endif  // TILTRL_REWARD_H_
