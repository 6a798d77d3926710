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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tiltrl/random.h"

namespace tiltrl {
namespace {

// Literal transcription of the reward table, one function per row.
struct Oracle {
  static double DesiredPosition(double p) { return std::tanh(p / 0.6); }
  static double DesiredPose(double p, double th) {
    return (1 - std::tanh(th / 2)) * (1 - std::tanh(p / 2));
  }
  static double ReachPosition(double p, double v) {
    if (!(p < 0.02 && v < 0.02)) return 0.0;
    return std::exp(-p / 0.02) + std::exp(-v / 0.02);
  }
  static double ReachPose(double p, double th, double v, double w) {
    if (!(p < 0.02 && th < 0.05 && v < 0.02 && w < 0.02)) return 0.0;
    return std::exp(-p / 0.02) + std::exp(-v / 0.02) +
           std::exp(-2 * th / 0.05) + std::exp(-2 * w / 0.02);
  }
  static double LinearVelocity(double v) {
    return std::pow(std::exp(0.6 * std::min(v, 4.0)) - 1, 2);
  }
  static double AngularVelocity(double w) {
    return std::pow(std::exp(0.4 * std::min(w, 6.0)) - 1, 2);
  }
};

RewardInputs RandomInputs(std::mt19937_64& rng, bool near) {
  RewardInputs in;
  const double s = near ? 0.03 : 3.0;
  in.position_error = UniformRange(rng, 0, s);
  in.orientation_error = UniformRange(rng, 0, near ? 0.07 : 5.0);
  in.linear_speed = UniformRange(rng, 0, near ? 0.03 : 6.0);
  in.angular_speed = UniformRange(rng, 0, near ? 0.03 : 8.0);
  for (int i = 0; i < 4; ++i) {
    in.joint_targets[i] = UniformRange(rng, -5, 5);
    in.prev_joint_targets[i] = UniformRange(rng, -5, 5);
    in.thrust_targets[i] = UniformRange(rng, -2, 24);
    in.prev_thrust_targets[i] = UniformRange(rng, -2, 24);
    in.applied_thrusts[i] = UniformRange(rng, 0, 20);
    in.joint_velocities[i] = UniformRange(rng, -10, 10);
    in.prev_joint_velocities[i] = UniformRange(rng, -10, 10);
  }
  in.body_z = Vec3(UniformRange(rng, -1, 1), UniformRange(rng, -1, 1),
                   UniformRange(rng, -1, 1))
                  .normalized();
  in.target_body_z = Vec3(UniformRange(rng, -1, 1), UniformRange(rng, -1, 1),
                          UniformRange(rng, -1, 1))
                         .normalized();
  return in;
}

TEST(RewardTest, WeightsVerbatim) {
  const RewardWeights w = kDefaultRewardWeights;
  const double want[14] = {-1.0, 2.0,  1.0,     0.75,    -0.03,
                           -0.05, -0.02, -0.01, -5.0e-4, -1.0e-4,
                           -1.0e-5, -1.5e-5, -0.1, -1.0e-5};
  for (int k = 0; k < kNumRewardTerms; ++k) EXPECT_EQ(w[k], want[k]);
}

TEST(RewardTest, ZeroErrorMaxima) {
  RewardInputs in;
  in.thrust_targets = {7, 7, 7, 7};
  in.prev_thrust_targets = in.thrust_targets;
  const RewardBreakdown r = ComputeReward(in, RewardConfig());
  EXPECT_EQ(r.terms[kDesiredPosition], 0.0);
  EXPECT_EQ(r.terms[kDesiredPose], 1.0);
  EXPECT_EQ(r.weights[kDesiredPose] * r.terms[kDesiredPose], 2.0);
  EXPECT_EQ(r.weights[kReachPosition] * r.terms[kReachPosition], 2.0);
  EXPECT_EQ(r.weights[kReachPose] * r.terms[kReachPose], 3.0);
}

TEST(RewardTest, DesiredPositionExample) {
  RewardInputs in;
  in.position_error = 0.6;
  const RewardBreakdown r = ComputeReward(in, RewardConfig());
  EXPECT_NEAR(r.weights[kDesiredPosition] * r.terms[kDesiredPosition],
              -std::tanh(1.0), 1e-15);
  EXPECT_NEAR(-std::tanh(1.0), -0.7616, 1e-4);
}

TEST(RewardTest, LinearVelocityExample) {
  RewardInputs in;
  in.linear_speed = 4.0;
  const RewardBreakdown r = ComputeReward(in, RewardConfig());
  const double value = r.weights[kLinearVelocity] * r.terms[kLinearVelocity];
  EXPECT_NEAR(value, -0.03 * std::pow(std::exp(2.4) - 1, 2), 1e-12);
  EXPECT_NEAR(value, -3.013, 1e-3);
}

TEST(RewardTest, RandomStatesMatchOracle) {
  std::mt19937_64 rng(51);
  for (int n = 0; n < 50; ++n) {
    const RewardInputs in = RandomInputs(rng, n % 2 == 0);
    const RewardBreakdown r = ComputeReward(in, RewardConfig());
    const double p = in.position_error;
    const double th = in.orientation_error;
    const double v = in.linear_speed;
    const double w = in.angular_speed;
    double jl = 0, tl = 0, jr = 0, tr = 0, tp = 0, ja = 0, mean = 0, alloc = 0;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(in.joint_targets[i]) > 3.96) {
        jl += std::abs(in.joint_targets[i]) - 3.96;
      }
      if (in.thrust_targets[i] > 20.0) tl += std::pow(in.thrust_targets[i] - 20, 2);
      jr += std::pow(in.joint_targets[i] - in.prev_joint_targets[i], 2);
      tr += std::pow(in.thrust_targets[i] - in.prev_thrust_targets[i], 2);
      tp += std::pow(in.applied_thrusts[i], 2);
      ja += std::pow(in.joint_velocities[i] - in.prev_joint_velocities[i], 2);
      mean += in.thrust_targets[i] / 4;
    }
    for (int i = 0; i < 4; ++i) alloc += std::pow(in.thrust_targets[i] - mean, 2);
    alloc *= in.body_z.z() * in.body_z.z();
    const double align = (in.body_z - in.target_body_z).norm() > 1.5 ? 1 : 0;
    const double want[14] = {Oracle::DesiredPosition(p),
                             Oracle::DesiredPose(p, th),
                             Oracle::ReachPosition(p, v),
                             Oracle::ReachPose(p, th, v, w),
                             Oracle::LinearVelocity(v),
                             Oracle::AngularVelocity(w),
                             jl, tl, jr, tr, tp, ja, align, alloc};
    double total = 0.0;
    for (int k = 0; k < kNumRewardTerms; ++k) {
      EXPECT_NEAR(r.terms[k], want[k], 1e-9 * std::max(1.0, std::abs(want[k])))
          << RewardTermName(k);
      total += kDefaultRewardWeights[k] * r.terms[k];
    }
    EXPECT_NEAR(r.total, total, 1e-12 * std::max(1.0, std::abs(total)));
  }
}

TEST(RewardTest, ReachPoseRequiresAllThresholds) {
  std::mt19937_64 rng(52);
  for (int n = 0; n < 2000; ++n) {
    const RewardInputs in = RandomInputs(rng, true);
    const bool all = in.position_error < 0.02 && in.orientation_error < 0.05 &&
                     in.linear_speed < 0.02 && in.angular_speed < 0.02;
    const RewardBreakdown r = ComputeReward(in, RewardConfig());
    EXPECT_EQ(r.terms[kReachPose] > 0.0, all);
  }
}

TEST(RewardTest, ThrustLimitationGate) {
  RewardInputs in;
  in.thrust_targets = {7, 21, 7, 7};
  RewardConfig gated;
  EXPECT_NEAR(ComputeReward(in, gated).terms[kThrustLimitation], 1.0, 1e-15);
  RewardConfig literal;
  literal.gate_thrust_limit = false;
  EXPECT_NEAR(ComputeReward(in, literal).terms[kThrustLimitation],
              3 * 169.0 + 1.0, 1e-12);
}

TEST(RewardTest, EqualThrustsHaveNoAllocationPenalty) {
  std::mt19937_64 rng(53);
  for (int n = 0; n < 100; ++n) {
    RewardInputs in = RandomInputs(rng, false);
    const double f = UniformRange(rng, 0, 20);
    in.thrust_targets = {f, f, f, f};
    EXPECT_EQ(ComputeReward(in, RewardConfig()).terms[kThrustAllocation], 0.0);
  }
}

}  // namespace
}  // namespace tiltrl
