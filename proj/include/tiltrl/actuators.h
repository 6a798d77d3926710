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

// Identified actuator models: the rotor thrust polynomial and its inverse,
// PD joint servos with limits, and integer-step delay lines.

#ifndef TILTRL_ACTUATORS_H_
#define TILTRL_ACTUATORS_H_

#include <array>
#include <cstddef>
#include <deque>
#include <limits>

#include "tiltrl/kv_config.h"

namespace tiltrl {

// Thrust f(cmd, V) = sum_k coeffs[k] * basis_k with basis
// {1, cmd, cmd^2, V, cmd V, cmd^2 V}. cmd is normalized to [cmd_min, cmd_max].
struct RotorModel {
  static constexpr int kNumCoefficients = 6;

  std::array<double, kNumCoefficients> coefficients{0.0, 0.0, 0.0,
                                                    0.0, 0.0, 20.0 / 25.2};
  double torque_thrust_ratio = 0.0165;  // m
  double thrust_limit = 20.0;           // N
  double cmd_min = 0.0;
  double cmd_max = 1.0;
  double voltage_min = 21.0;  // V
  double voltage_max = 25.2;  // V

  static std::array<double, kNumCoefficients> Basis(double cmd, double voltage);
  // Unclamped polynomial value.
  double Polynomial(double cmd, double voltage) const;

  // True when the polynomial is nondecreasing in cmd on a grid over the valid
  // cmd/voltage box and nonnegative at cmd_min.
  bool IsMonotone(int grid = 64) const;

  static RotorModel FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

// Polynomial thrust clamped to [0, thrust_limit]. Throws kOutOfRange when cmd
// or voltage lies outside the fitted ranges.
double RotorForward(const RotorModel& model, double cmd, double voltage);

// Reaction torque magnitude C_Omega * f.
double RotorTorque(const RotorModel& model, double thrust);

// Bisection inverse of RotorForward: returns cmd with
// |RotorForward(cmd, V) - f_target| < 1e-6. Throws kUnreachable when
// f_target exceeds the maximum thrust at `voltage` and kOutOfRange for
// negative targets or voltages outside the fitted range.
double RotorInverse(const RotorModel& model, double f_target, double voltage);

struct JointServo {
  double kp = 0.3449;              // N m / rad
  double kd = 0.0094;              // N m s / rad
  double inertia = 1.307e-4;       // kg m^2, effective
  double velocity_limit = 10.0;    // rad/s
  double effort_limit = 3.0;       // N m
  double position_limit = 3.96;    // rad
  // Internal integration step; joint_step subdivides dt to stay below it.
  double max_substep = 2.5e-5;     // s

  double NaturalFrequency() const;
  double DampingRatio() const;

  // Servo with velocity and effort limits removed (position stops kept).
  JointServo WithoutRateLimits() const;

  static JointServo FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

struct JointState {
  double position = 0.0;
  double velocity = 0.0;
};

struct JointStepResult {
  JointState state;
  // Time-averaged PD torque applied over the step.
  double mean_torque = 0.0;
};

// Advances one joint under tau = clamp(kp (q_cmd - q) - kd qd, +-effort)
// with semi-implicit substeps; the command is clamped to the position limit
// first, velocity is clamped to the velocity limit and the position to the
// joint stops, where the velocity is zeroed.
JointStepResult JointStep(const JointServo& servo, const JointState& state,
                          double q_cmd, double dt);

// Fixed integer-step delay: the value popped at step t is the value pushed at
// step t - delay, or the fill value before that.
template <typename T>
class DelayLine {
 public:
  DelayLine() = default;
  DelayLine(std::size_t delay, const T& fill) { Reset(delay, fill); }

  void Reset(std::size_t delay, const T& fill) {
    delay_ = delay;
    queue_.assign(delay, fill);
  }

  T PushPop(const T& value) {
    queue_.push_back(value);
    T out = queue_.front();
    queue_.pop_front();
    return out;
  }

  std::size_t delay() const { return delay_; }

 private:
  std::size_t delay_ = 0;
  std::deque<T> queue_;
};

}  // namespace tiltrl

#endif  // TILTRL_ACTUATORS_H_
