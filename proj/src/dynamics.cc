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

#include "tiltrl/dynamics.h"

#include <cmath>
#include <string>

#include "tiltrl/error.h"

namespace tiltrl {
namespace {

// Largest accepted integration step, s. Coarse steps are allowed for
// quick checks; the environment uses 2.5 ms.
constexpr double kMaxStep = 0.1;

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

bool AllFinite(const Vec3& v) { return v.allFinite(); }

}  // namespace

void PhysicalParams::Validate() const {
  Require(mass > 0.0, "mass must be positive");
  Require((inertia_diag.array() > 0.0).all(), "inertia must be positive");
  Require(rotor_arm_radius > 0.0, "rotor_arm_radius must be positive");
  Require(joint_limit > 0.0, "joint_limit must be positive");
  Require(thrust_limit > 0.0, "thrust_limit must be positive");
  Require(torque_thrust_ratio >= 0.0, "torque_thrust_ratio must be >= 0");
  double spin_sum = 0.0;
  for (double s : rotor_spin_signs) {
    Require(s == 1.0 || s == -1.0, "rotor spin signs must be +-1");
    spin_sum += s;
  }
  Require(spin_sum == 0.0, "rotor spin signs must sum to zero");
  Require(com_offset.allFinite(), "com_offset must be finite");
}

Vec3 PhysicalParams::RotorPosition(int rotor) const {
  const double azimuth = arm_azimuths[rotor];
  return rotor_arm_radius * Vec3(std::cos(azimuth), std::sin(azimuth), 0.0);
}

Vec3 PhysicalParams::TiltAxis(int rotor) const {
  const double azimuth = arm_azimuths[rotor];
  return Vec3(std::cos(azimuth), std::sin(azimuth), 0.0);
}

Vec3 PhysicalParams::ThrustDirection(int rotor, double q) const {
  // Rodrigues rotation of +z about the radial axis u: since u is orthogonal
  // to z, d = z cos(q) + (u x z) sin(q).
  const double azimuth = arm_azimuths[rotor];
  const Vec3 u_cross_z(std::sin(azimuth), -std::cos(azimuth), 0.0);
  return std::cos(q) * Vec3::UnitZ() + std::sin(q) * u_cross_z;
}

PhysicalParams PhysicalParams::FromConfig(const KeyValueConfig& config) {
  PhysicalParams p;
  config.Read("mass", &p.mass);
  config.ReadFixed("inertia_diag", &p.inertia_diag);
  config.Read("rotor_arm_radius", &p.rotor_arm_radius);
  config.Read("joint_limit", &p.joint_limit);
  config.Read("thrust_limit", &p.thrust_limit);
  config.Read("torque_thrust_ratio", &p.torque_thrust_ratio);
  config.Read("gravity", &p.gravity);
  config.ReadFixed("rotor_spin_signs", &p.rotor_spin_signs);
  config.ReadFixed("arm_azimuths", &p.arm_azimuths);
  config.ReadFixed("com_offset", &p.com_offset);
  p.Validate();
  return p;
}

void PhysicalParams::WriteTo(KeyValueConfig* config) const {
  config->Set("mass", mass);
  config->SetFixed("inertia_diag", inertia_diag);
  config->Set("rotor_arm_radius", rotor_arm_radius);
  config->Set("joint_limit", joint_limit);
  config->Set("thrust_limit", thrust_limit);
  config->Set("torque_thrust_ratio", torque_thrust_ratio);
  config->Set("gravity", gravity);
  config->SetFixed("rotor_spin_signs", rotor_spin_signs);
  config->SetFixed("arm_azimuths", arm_azimuths);
  config->SetFixed("com_offset", com_offset);
}

bool RobotState::IsFinite() const {
  if (!AllFinite(position) || !AllFinite(linear_velocity) ||
      !AllFinite(angular_velocity) || !orientation.eigen().coeffs().allFinite()) {
    return false;
  }
  for (int i = 0; i < kNumRotors; ++i) {
    if (!std::isfinite(joint_positions[i]) ||
        !std::isfinite(joint_velocities[i])) {
      return false;
    }
  }
  return true;
}

BodyWrench RotorWrench(const PhysicalParams& params,
                       std::span<const double, kNumRotors> joint_positions,
                       std::span<const double, kNumRotors> thrusts) {
  BodyWrench wrench;
  for (int i = 0; i < kNumRotors; ++i) {
    const double f = thrusts[i];
    if (!(f >= 0.0 && f <= params.thrust_limit)) {
      throw Error(ErrorCode::kOutOfRangeThrust,
                  "rotor " + std::to_string(i) + " thrust " +
                      std::to_string(f) + " outside [0, " +
                      std::to_string(params.thrust_limit) + "]");
    }
    const Vec3 force = f * params.ThrustDirection(i, joint_positions[i]);
    const Vec3 lever = params.RotorPosition(i) - params.com_offset;
    wrench.force += force;
    wrench.torque += lever.cross(force) + params.rotor_spin_signs[i] *
                                              params.torque_thrust_ratio *
                                              force;
  }
  return wrench;
}

RobotState Step(const PhysicalParams& params, const RobotState& state,
                const BodyWrench& wrench, const WorldWrench& external,
                double dt) {
  if (!(dt > 0.0 && dt <= kMaxStep)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dt must lie in (0, 0.1], got " + std::to_string(dt));
  }
  const Mat3 rotation = state.orientation.Matrix();
  const Vec3& inertia = params.inertia_diag;

  RobotState next = state;
  const Vec3 gravity(0.0, 0.0, -params.gravity);
  const Vec3 acceleration =
      gravity + (rotation * wrench.force + external.force) / params.mass;
  next.linear_velocity = state.linear_velocity + dt * acceleration;
  next.position = state.position + dt * next.linear_velocity;

  const Vec3 torque = wrench.torque + rotation.transpose() * external.torque;
  const Vec3 momentum =
      inertia.cwiseProduct(state.angular_velocity) + dt * torque;
  const Vec3 omega = momentum.cwiseQuotient(inertia);
  const UnitQuaternion increment = UnitQuaternion::FromRotationVector(dt * omega);
  next.orientation = state.orientation * increment;
  next.angular_velocity =
      increment.InverseRotate(momentum).cwiseQuotient(inertia);

  if (!next.IsFinite()) {
    throw Error(ErrorCode::kNonFiniteState, "integrator produced NaN/Inf");
  }
  return next;
}

Vec3 WorldAngularMomentum(const PhysicalParams& params,
                          const RobotState& state) {
  return state.orientation.Rotate(
      params.inertia_diag.cwiseProduct(state.angular_velocity));
}

PhysicalParams ApplyPayload(const PhysicalParams& params, double added_mass,
                            const Vec3& attach_offset) {
  if (!(added_mass >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "added mass must be >= 0");
  }
  if (added_mass == 0.0) return params;
  PhysicalParams out = params;
  out.mass = params.mass + added_mass;
  out.com_offset =
      (params.mass * params.com_offset + added_mass * attach_offset) / out.mass;
  const Vec3 r = attach_offset;
  out.inertia_diag += added_mass * Vec3(r.y() * r.y() + r.z() * r.z(),
                                        r.x() * r.x() + r.z() * r.z(),
                                        r.x() * r.x() + r.y() * r.y());
  return out;
}

}  // namespace tiltrl
