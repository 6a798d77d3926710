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

#include "tiltrl/actuators.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tiltrl/error.h"

namespace tiltrl {
namespace {

void CheckRange(const char* name, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    throw Error(ErrorCode::kOutOfRange,
                std::string(name) + " " + std::to_string(value) +
                    " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
}

}  // namespace

std::array<double, RotorModel::kNumCoefficients> RotorModel::Basis(
    double cmd, double voltage) {
  const double c2 = cmd * cmd;
  return {1.0, cmd, c2, voltage, cmd * voltage, c2 * voltage};
}

double RotorModel::Polynomial(double cmd, double voltage) const {
  const auto basis = Basis(cmd, voltage);
  double f = 0.0;
  for (int k = 0; k < kNumCoefficients; ++k) f += coefficients[k] * basis[k];
  return f;
}

bool RotorModel::IsMonotone(int grid) const {
  for (int iv = 0; iv <= grid; ++iv) {
    const double v =
        voltage_min + (voltage_max - voltage_min) * iv / static_cast<double>(grid);
    if (Polynomial(cmd_min, v) < 0.0) return false;
    double previous = Polynomial(cmd_min, v);
    for (int ic = 1; ic <= grid; ++ic) {
      const double cmd =
          cmd_min + (cmd_max - cmd_min) * ic / static_cast<double>(grid);
      const double f = Polynomial(cmd, v);
      if (f < previous) return false;
      previous = f;
    }
  }
  return true;
}

RotorModel RotorModel::FromConfig(const KeyValueConfig& config) {
  RotorModel m;
  config.ReadFixed("rotor_coefficients", &m.coefficients);
  config.Read("torque_thrust_ratio", &m.torque_thrust_ratio);
  config.Read("thrust_limit", &m.thrust_limit);
  config.Read("rotor_cmd_min", &m.cmd_min);
  config.Read("rotor_cmd_max", &m.cmd_max);
  config.Read("rotor_voltage_min", &m.voltage_min);
  config.Read("rotor_voltage_max", &m.voltage_max);
  if (!(m.cmd_max > m.cmd_min) || !(m.voltage_max >= m.voltage_min)) {
    throw Error(ErrorCode::kInvalidArgument, "rotor ranges are empty");
  }
  return m;
}

void RotorModel::WriteTo(KeyValueConfig* config) const {
  config->SetFixed("rotor_coefficients", coefficients);
  config->Set("torque_thrust_ratio", torque_thrust_ratio);
  config->Set("thrust_limit", thrust_limit);
  config->Set("rotor_cmd_min", cmd_min);
  config->Set("rotor_cmd_max", cmd_max);
  config->Set("rotor_voltage_min", voltage_min);
  config->Set("rotor_voltage_max", voltage_max);
}

double RotorForward(const RotorModel& model, double cmd, double voltage) {
  CheckRange("cmd", cmd, model.cmd_min, model.cmd_max);
  CheckRange("voltage", voltage, model.voltage_min, model.voltage_max);
  return std::clamp(model.Polynomial(cmd, voltage), 0.0, model.thrust_limit);
}

double RotorTorque(const RotorModel& model, double thrust) {
  return model.torque_thrust_ratio * thrust;
}

double RotorInverse(const RotorModel& model, double f_target, double voltage) {
  CheckRange("voltage", voltage, model.voltage_min, model.voltage_max);
  if (!(f_target >= 0.0)) {
    throw Error(ErrorCode::kOutOfRange, "negative thrust target");
  }
  const double f_max = RotorForward(model, model.cmd_max, voltage);
  if (f_target > f_max) {
    throw Error(ErrorCode::kUnreachable,
                "thrust " + std::to_string(f_target) + " N exceeds maximum " +
                    std::to_string(f_max) + " N at " + std::to_string(voltage) +
                    " V");
  }
  double lo = model.cmd_min;
  double hi = model.cmd_max;
  if (RotorForward(model, lo, voltage) >= f_target) return lo;
  // Invariant: f(lo) < target <= f(hi).
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (RotorForward(model, mid, voltage) < f_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double f_lo = RotorForward(model, lo, voltage);
  const double f_hi = RotorForward(model, hi, voltage);
  return (f_target - f_lo <= f_hi - f_target) ? lo : hi;
}

double JointServo::NaturalFrequency() const { return std::sqrt(kp / inertia); }

double JointServo::DampingRatio() const {
  return kd / (2.0 * std::sqrt(kp * inertia));
}

JointServo JointServo::WithoutRateLimits() const {
  JointServo out = *this;
  out.velocity_limit = std::numeric_limits<double>::infinity();
  out.effort_limit = std::numeric_limits<double>::infinity();
  return out;
}

JointServo JointServo::FromConfig(const KeyValueConfig& config) {
  JointServo s;
  config.Read("joint_kp", &s.kp);
  config.Read("joint_kd", &s.kd);
  config.Read("joint_inertia", &s.inertia);
  config.Read("joint_velocity_limit", &s.velocity_limit);
  config.Read("joint_effort_limit", &s.effort_limit);
  config.Read("joint_limit", &s.position_limit);
  config.Read("joint_max_substep", &s.max_substep);
  if (!(s.kp > 0.0) || !(s.kd >= 0.0) || !(s.inertia > 0.0) ||
      !(s.max_substep > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid joint servo parameters");
  }
  return s;
}

void JointServo::WriteTo(KeyValueConfig* config) const {
  config->Set("joint_kp", kp);
  config->Set("joint_kd", kd);
  config->Set("joint_inertia", inertia);
  config->Set("joint_velocity_limit", velocity_limit);
  config->Set("joint_effort_limit", effort_limit);
  config->Set("joint_limit", position_limit);
  config->Set("joint_max_substep", max_substep);
}

JointStepResult JointStep(const JointServo& servo, const JointState& state,
                          double q_cmd, double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "joint dt must be positive");
  }
  const double target =
      std::clamp(q_cmd, -servo.position_limit, servo.position_limit);
  const int substeps =
      std::max(1, static_cast<int>(std::ceil(dt / servo.max_substep - 1e-9)));
  const double h = dt / substeps;

  double q = state.position;
  double qd = state.velocity;
  double torque_sum = 0.0;
  for (int k = 0; k < substeps; ++k) {
    const double torque =
        std::clamp(servo.kp * (target - q) - servo.kd * qd,
                   -servo.effort_limit, servo.effort_limit);
    torque_sum += torque;
    qd += h * torque / servo.inertia;
    qd = std::clamp(qd, -servo.velocity_limit, servo.velocity_limit);
    q += h * qd;
    if (q > servo.position_limit) {
      q = servo.position_limit;
      qd = 0.0;
    } else if (q < -servo.position_limit) {
      q = -servo.position_limit;
      qd = 0.0;
    }
  }
  return {{q, qd}, torque_sum / substeps};
}

}  // namespace tiltrl
