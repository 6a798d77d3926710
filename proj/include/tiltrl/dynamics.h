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

// Floating-base rigid-body dynamics of a tiltable X-configuration
// quadrotor. Each rotor module tilts about its radial arm axis; at zero tilt
// the thrust points along body +z.

#ifndef TILTRL_DYNAMICS_H_
#define TILTRL_DYNAMICS_H_

#include <array>
#include <span>

#include "tiltrl/kv_config.h"
#include "tiltrl/rotations.h"

namespace tiltrl {

inline constexpr int kNumRotors = 4;

using Array4 = std::array<double, kNumRotors>;

struct PhysicalParams {
  double mass = 3.0386;                        // kg
  Vec3 inertia_diag{0.0627, 0.0620, 0.0948};   // kg m^2, about the CoM
  double rotor_arm_radius = 0.275;             // m, half the diagonal
  double joint_limit = 3.96;                   // rad
  double thrust_limit = 20.0;                  // N
  double torque_thrust_ratio = 0.0165;         // m
  double gravity = 9.81;                       // m/s^2
  Array4 rotor_spin_signs{1.0, -1.0, 1.0, -1.0};
  Array4 arm_azimuths{0.25 * kPi, 0.75 * kPi, 1.25 * kPi, 1.75 * kPi};
  Vec3 com_offset = Vec3::Zero();              // m, body frame

  // Throws kInvalidArgument when an invariant is violated.
  void Validate() const;

  // Rotor hub position relative to the body origin.
  Vec3 RotorPosition(int rotor) const;
  // Radial arm direction, which is also the tilt joint axis.
  Vec3 TiltAxis(int rotor) const;
  // Thrust direction of a rotor for joint angle `q`.
  Vec3 ThrustDirection(int rotor, double q) const;

  // mg / 4: the per-rotor thrust that balances gravity at zero tilt.
  double HoverThrust() const { return mass * gravity / kNumRotors; }

  static PhysicalParams FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

struct RobotState {
  Vec3 position = Vec3::Zero();          // world
  UnitQuaternion orientation;            // body -> world
  Vec3 linear_velocity = Vec3::Zero();   // world
  Vec3 angular_velocity = Vec3::Zero();  // body
  Array4 joint_positions{};
  Array4 joint_velocities{};

  bool IsFinite() const;
  // Linear velocity expressed in the body frame.
  Vec3 BodyLinearVelocity() const {
    return orientation.InverseRotate(linear_velocity);
  }
};

// Force and torque about the center of mass, body frame.
struct BodyWrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  BodyWrench& operator+=(const BodyWrench& other) {
    force += other.force;
    torque += other.torque;
    return *this;
  }
};

// Force and torque about the center of mass, world frame.
struct WorldWrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

// Sum of rotor thrusts and reaction torques for joint angles `joint_positions`
// and thrusts `thrusts`. Throws kOutOfRangeThrust when a thrust lies outside
// [0, thrust_limit].
BodyWrench RotorWrench(const PhysicalParams& params,
                       std::span<const double, kNumRotors> joint_positions,
                       std::span<const double, kNumRotors> thrusts);

// One semi-implicit Euler step of the base. Linear velocity is updated first
// and then used for the position. For the rotation, the body angular momentum
// receives the torque impulse and is then carried along with the same
// incremental rotation applied to the orientation, which keeps world-frame
// angular momentum exact when no torque acts. Joint states are untouched.
// Throws kInvalidArgument for dt outside (0, 0.1] and kNonFiniteState when
// the result is not finite.
RobotState Step(const PhysicalParams& params, const RobotState& state,
                const BodyWrench& wrench, const WorldWrench& external,
                double dt);

// World-frame angular momentum R I w.
Vec3 WorldAngularMomentum(const PhysicalParams& params,
                          const RobotState& state);

// Adds a point mass rigidly at `attach_offset` (body frame). Mass adds, the
// CoM moves to the weighted mean, and the diagonal inertia grows by the
// point-mass parallel-axis terms about the body origin.
PhysicalParams ApplyPayload(const PhysicalParams& params, double added_mass,
                            const Vec3& attach_offset);

}  // namespace tiltrl

#endif  // TILTRL_DYNAMICS_H_
