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

#include "tiltrl/reward.h"

#include <algorithm>
#include <cmath>

namespace tiltrl {
namespace {

constexpr double kReachPositionTol = 0.02;     // m
constexpr double kReachOrientationTol = 0.05;  // rad
constexpr double kReachLinearTol = 0.02;       // m/s
constexpr double kReachAngularTol = 0.02;      // rad/s
constexpr double kAxisMisalignment = 1.5;

double Indicator(bool condition) { return condition ? 1.0 : 0.0; }

double Square(double x) { return x * x; }

}  // namespace

std::string_view RewardTermName(int term) {
  static constexpr std::string_view kNames[kNumRewardTerms] = {
      "desired_position",   "desired_pose",        "reach_position",
      "reach_pose",         "linear_velocity",     "angular_velocity",
      "joint_limitation",   "thrust_limitation",   "joint_action_rate",
      "thrust_action_rate", "thrust_power",        "joint_acceleration",
      "z_axis_align",       "thrust_allocation"};
  return kNames[term];
}

RewardBreakdown ComputeReward(const RewardInputs& in,
                              const RewardConfig& config) {
  RewardBreakdown out;
  out.weights = config.weights;
  auto& t = out.terms;

  const double p = in.position_error;
  const double theta = in.orientation_error;
  const double v = in.linear_speed;
  const double w = in.angular_speed;

  t[kDesiredPosition] = std::tanh(p / 0.6);
  t[kDesiredPose] = (1.0 - std::tanh(theta / 2.0)) * (1.0 - std::tanh(p / 2.0));

  const bool position_reached = p < kReachPositionTol && v < kReachLinearTol;
  t[kReachPosition] =
      Indicator(position_reached) *
      (std::exp(-p / kReachPositionTol) + std::exp(-v / kReachLinearTol));

  const bool pose_reached = position_reached &&
                            theta < kReachOrientationTol &&
                            w < kReachAngularTol;
  t[kReachPose] = Indicator(pose_reached) *
                  (std::exp(-p / kReachPositionTol) +
                   std::exp(-v / kReachLinearTol) +
                   std::exp(-2.0 * theta / kReachOrientationTol) +
                   std::exp(-2.0 * w / kReachAngularTol));

  t[kLinearVelocity] = Square(std::exp(0.6 * std::min(v, 4.0)) - 1.0);
  t[kAngularVelocity] = Square(std::exp(0.4 * std::min(w, 6.0)) - 1.0);

  double joint_limitation = 0.0;
  double thrust_limitation = 0.0;
  double joint_rate = 0.0;
  double thrust_rate = 0.0;
  double thrust_power = 0.0;
  double joint_accel = 0.0;
  double thrust_mean = 0.0;
  for (int i = 0; i < kNumRotors; ++i) {
    const double excess = std::abs(in.joint_targets[i]) - in.joint_limit;
    joint_limitation += excess * Indicator(excess > 0.0);
    const double over = in.thrust_targets[i] - in.thrust_limit;
    thrust_limitation +=
        Square(over) * (config.gate_thrust_limit ? Indicator(over > 0.0) : 1.0);
    joint_rate += Square(in.joint_targets[i] - in.prev_joint_targets[i]);
    thrust_rate += Square(in.thrust_targets[i] - in.prev_thrust_targets[i]);
    thrust_power += Square(in.applied_thrusts[i]);
    joint_accel += Square(in.joint_velocities[i] - in.prev_joint_velocities[i]);
    thrust_mean += in.thrust_targets[i];
  }
  thrust_mean /= kNumRotors;
  double thrust_spread = 0.0;
  for (int i = 0; i < kNumRotors; ++i) {
    thrust_spread += Square(in.thrust_targets[i] - thrust_mean);
  }
  t[kJointLimitation] = joint_limitation;
  t[kThrustLimitation] = thrust_limitation;
  t[kJointActionRate] = joint_rate;
  t[kThrustActionRate] = thrust_rate;
  t[kThrustPower] = thrust_power;
  t[kJointAcceleration] = joint_accel;
  t[kZAxisAlign] =
      Indicator((in.body_z - in.target_body_z).norm() > kAxisMisalignment);
  t[kThrustAllocation] = thrust_spread * Square(in.body_z.z());

  out.total = 0.0;
  for (int k = 0; k < kNumRewardTerms; ++k) out.total += out.weights[k] * t[k];
  return out;
}

}  // namespace tiltrl
