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

#include "tiltrl/trajectory_log.h"

#include <cstdio>

namespace tiltrl {
namespace {

void Append(std::string* line, double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  line->push_back(',');
  line->append(buffer);
}

template <typename Container>
void AppendAll(std::string* line, const Container& values) {
  for (double v : values) Append(line, v);
}

void AppendNames(std::string* line, const std::string& prefix, int count) {
  for (int k = 0; k < count; ++k) {
    line->append("," + prefix + std::to_string(k));
  }
}

}  // namespace

TrajectoryRow CaptureRow(const TiltEnv& env, const Action& action,
                         const StepResult& result, int segment, double time) {
  TrajectoryRow row;
  row.segment = segment;
  row.step = env.step_count();
  row.time = time;
  row.state = env.state();
  row.target = env.target();
  row.action = action;
  row.joint_targets = env.applied_joint_targets();
  row.thrusts = env.applied_thrusts();
  row.reward = result.reward;
  row.position_error = (row.state.position - row.target.position).norm();
  row.orientation_error = EulerError(QuatToEuler(row.state.orientation),
                                     QuatToEuler(row.target.orientation))
                              .norm();
  return row;
}

std::string TrajectoryCsvHeader() {
  std::string h = "segment,step,time,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz";
  AppendNames(&h, "q", kNumRotors);
  AppendNames(&h, "qd", kNumRotors);
  h += ",target_px,target_py,target_pz,target_qw,target_qx,target_qy,target_qz";
  AppendNames(&h, "a", kActionSize);
  AppendNames(&h, "q_cmd", kNumRotors);
  AppendNames(&h, "f", kNumRotors);
  for (int k = 0; k < kNumRewardTerms; ++k) {
    h += ",r_" + std::string(RewardTermName(k));
  }
  h += ",reward_total,position_error,orientation_error";
  return h;
}

std::string FormatTrajectoryRow(const TrajectoryRow& row) {
  std::string line = std::to_string(row.segment) + "," + std::to_string(row.step);
  const RobotState& s = row.state;
  Append(&line, row.time);
  AppendAll(&line, s.position);
  AppendAll(&line, Eigen::Vector4d(s.orientation.w(), s.orientation.x(),
                                   s.orientation.y(), s.orientation.z()));
  AppendAll(&line, s.linear_velocity);
  AppendAll(&line, s.angular_velocity);
  AppendAll(&line, s.joint_positions);
  AppendAll(&line, s.joint_velocities);
  AppendAll(&line, row.target.position);
  const UnitQuaternion& t = row.target.orientation;
  AppendAll(&line, Eigen::Vector4d(t.w(), t.x(), t.y(), t.z()));
  AppendAll(&line, row.action);
  AppendAll(&line, row.joint_targets);
  AppendAll(&line, row.thrusts);
  AppendAll(&line, row.reward.terms);
  Append(&line, row.reward.total);
  Append(&line, row.position_error);
  Append(&line, row.orientation_error);
  return line;
}

TrajectoryCsvWriter::TrajectoryCsvWriter(std::ostream* out) : out_(out) {
  *out_ << TrajectoryCsvHeader() << '\n';
}

void TrajectoryCsvWriter::Write(const TrajectoryRow& row) {
  *out_ << FormatTrajectoryRow(row) << '\n';
}

}  // namespace tiltrl
