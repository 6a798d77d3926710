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

// Pose-reaching POMDP for the tiltable quadrotor: action mapping, noisy and
// delayed observations, privileged critic state, reward, resets with domain
// randomization, and disturbance injection.

#ifndef TILTRL_ENVIRONMENT_H_
#define TILTRL_ENVIRONMENT_H_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "tiltrl/actuators.h"
#include "tiltrl/disturbance.h"
#include "tiltrl/dynamics.h"
#include "tiltrl/kv_config.h"
#include "tiltrl/reward.h"
#include "tiltrl/rotations.h"

namespace tiltrl {

inline constexpr int kActionSize = 8;
using Action = std::array<double, kActionSize>;

// Uniform per-episode bias in [-bias, bias] plus uniform per-step noise in
// [-noise, noise].
struct NoiseSpec {
  double bias = 0.0;
  double noise = 0.0;
};

// Inclusive range of integer control-step delays.
struct DelayRange {
  int min = 0;
  int max = 0;
};

struct RandomizationConfig {
  bool dynamics = true;
  std::array<double, 2> mass_scale{0.95, 1.05};
  std::array<double, 2> inertia_scale{0.95, 1.05};
  double com_bias = 0.01;  // m, per axis

  bool observation_noise = true;
  NoiseSpec position{0.01, 0.01};              // m
  NoiseSpec orientation_deg{0.01, 0.01};       // deg, per Euler angle
  NoiseSpec linear_velocity{0.005, 0.005};     // m/s
  NoiseSpec angular_velocity{0.005, 0.005};    // rad/s
  NoiseSpec joint_position_deg{3.0, 2.0};      // deg

  bool latency = true;
  DelayRange action_delay{1, 3};
  DelayRange velocity_delay{3, 5};
  DelayRange joint_delay{1, 2};

  // Everything off: nominal dynamics, exact observations, no delays.
  static RandomizationConfig Disabled();
};

enum class TaskMode {
  // Random SE(3) targets, random initial orientation, stratified joints.
  kPoseReaching,
  // Target equals the upright spawn pose; joints start at zero.
  kHover,
};

struct EnvConfig {
  PhysicalParams physical;
  JointServo servo;
  double control_dt = 0.01;  // s
  int physics_substeps = 4;
  double joint_scale = 0.25;  // c_j
  double thrust_scale = 0.5;  // c_r
  // Per-rotor hover constant C_f; non-positive means mg/4 of the nominal
  // (unrandomized) parameters.
  double hover_thrust = 0.0;
  Vec3 target_min{-2.0, -2.0, 0.5};
  Vec3 target_max{2.0, 2.0, 3.5};
  Vec3 spawn_position = Vec3::Zero();
  double initial_orientation_range = kPi;
  double target_orientation_range = kPi;
  bool joint_strata = true;
  int max_episode_steps = 800;
  double safety_radius = 6.0;  // m
  // Fraction of environments that keep the robot and draw a new target on
  // time-out instead of resetting fully.
  double continuation_fraction = 0.25;
  // Apply the equal-and-opposite servo torque about each tilt axis to the
  // base.
  bool servo_reaction = true;
  TaskMode task = TaskMode::kPoseReaching;
  RewardConfig reward;
  RandomizationConfig randomization;

  double EffectiveHoverThrust() const;
  double PhysicsDt() const { return control_dt / physics_substeps; }

  static EnvConfig FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

struct TargetPose {
  Vec3 position = Vec3::Zero();  // world
  UnitQuaternion orientation;
};

// Raw policy action and the commands it maps to.
struct ActionCommand {
  Action raw{};
  Array4 joint_targets_unclamped{};   // c_j a_j
  Array4 joint_targets{};             // clamped to +-q_max
  Array4 thrust_targets_unclamped{};  // c_r a_r + C_f
  Array4 thrust_targets{};            // clamped to [0, f_max]
};

ActionCommand MapAction(const Action& raw, double joint_scale,
                        double thrust_scale, double hover_thrust,
                        double joint_limit, double thrust_limit);

// Actor input, 33 values:
// [v_b(3), w_b(3), p*_b(3), R_b(6), R*_b(6), q_j(4), a_{t-1}(8)].
struct Observation {
  static constexpr int kSize = 33;
  static constexpr int kLinearVelocity = 0;
  static constexpr int kAngularVelocity = 3;
  static constexpr int kTargetPosition = 6;
  static constexpr int kOrientation = 9;
  static constexpr int kTargetOrientation = 15;
  static constexpr int kJointPositions = 21;
  static constexpr int kPreviousAction = 25;

  std::array<double, kSize> values{};
};

// Privileged critic input, 41 values: the observation layout with the rotor
// reaction torques and thrusts inserted before the previous action.
struct CriticState {
  static constexpr int kSize = 41;
  static constexpr int kLinearVelocity = 0;
  static constexpr int kAngularVelocity = 3;
  static constexpr int kTargetPosition = 6;
  static constexpr int kOrientation = 9;
  static constexpr int kTargetOrientation = 15;
  static constexpr int kJointPositions = 21;
  static constexpr int kRotorTorques = 25;
  static constexpr int kRotorThrusts = 29;
  static constexpr int kPreviousAction = 33;

  std::array<double, kSize> values{};
};

enum class TerminationReason { kNone, kTimeOut, kSafety, kNonFinite };

std::string_view TerminationReasonName(TerminationReason reason);

struct Termination {
  bool done = false;
  TerminationReason reason = TerminationReason::kNone;
};

// Evaluates time-out (step >= max_steps), safety escape
// (||p - p*|| > safety_radius) and non-finite state, in that order of
// precedence: non-finite, safety, time-out.
Termination CheckTermination(const RobotState& state, const TargetPose& target,
                             int step, int max_steps, double safety_radius);

// Per-episode random draws.
struct EpisodeLatents {
  PhysicalParams params;
  int stratum = 1;
  int action_joint_delay = 0;
  int action_thrust_delay = 0;
  int linear_velocity_delay = 0;
  int angular_velocity_delay = 0;
  int joint_delay = 0;
  Vec3 position_bias = Vec3::Zero();
  Vec3 orientation_bias = Vec3::Zero();  // rad
  Vec3 linear_velocity_bias = Vec3::Zero();
  Vec3 angular_velocity_bias = Vec3::Zero();
  Array4 joint_bias{};  // rad
};

struct StepResult {
  Observation observation;
  CriticState critic;
  RewardBreakdown reward;
  Termination termination;
};

class TiltEnv {
 public:
  // `env_index` selects the joint stratum and whether the environment
  // continues on time-out; `seed` and `env_index` together seed the RNG.
  TiltEnv(const EnvConfig& config, int env_index, uint64_t seed);

  // Full reset: new state, target, randomized dynamics, delays and biases.
  void Reset();
  // Keeps robot state, latents and delay lines; draws a new target and
  // restarts the episode clock.
  void ResampleTarget();

  StepResult Step(const Action& action);

  // Observation produced by the last Reset/Step/SetState.
  const Observation& observation() const { return observation_; }
  // Noise-free, delay-free critic input for the current state.
  CriticState BuildCriticState() const;

  // Replaces the robot state and refills observation delay lines with it.
  void SetState(const RobotState& state);
  // Updates the target fields of the current observation from the last
  // sensed pose; delay lines and noise draws are not advanced.
  void SetTarget(const TargetPose& target);
  // Replaces the randomized physical parameters (e.g. to attach a payload).
  void SetPhysicalParams(const PhysicalParams& params);
  void SetDisturbance(const DisturbanceSchedule& schedule);

  const EnvConfig& config() const { return config_; }
  const RobotState& state() const { return state_; }
  const TargetPose& target() const { return target_; }
  const EpisodeLatents& latents() const { return latents_; }
  const ActionCommand& last_command() const { return command_; }
  const Array4& applied_thrusts() const { return applied_thrusts_; }
  const Array4& applied_joint_targets() const { return applied_joint_targets_; }
  int step_count() const { return step_; }
  // Time since the last full reset, s; disturbance schedules use this clock.
  double sim_time() const;
  bool continues_on_timeout() const { return continues_on_timeout_; }
  int env_index() const { return env_index_; }
  double hover_thrust() const { return hover_thrust_; }

 private:
  // Advances the observation delay lines by one control step.
  Observation BuildObservation();
  void WriteTargetFields(Observation* o) const;
  void SampleLatents();
  void SampleTarget();
  void ResetDelayLines();
  RewardInputs MakeRewardInputs(const ActionCommand& command,
                                const Array4& prev_joint_velocities) const;
  double Uniform(double lo, double hi);
  int UniformInt(int lo, int hi);
  Vec3 UniformVec(double amplitude);

  EnvConfig config_;
  int env_index_ = 0;
  bool continues_on_timeout_ = false;
  double hover_thrust_ = 0.0;
  std::mt19937_64 rng_;

  RobotState state_;
  TargetPose target_;
  EulerAngles target_euler_;
  EpisodeLatents latents_;
  DisturbanceSchedule disturbance_;

  DelayLine<Array4> joint_command_delay_;
  DelayLine<Array4> thrust_command_delay_;
  DelayLine<Vec3> linear_velocity_delay_;
  DelayLine<Vec3> angular_velocity_delay_;
  DelayLine<Array4> joint_observation_delay_;

  Observation observation_;
  // Noisy pose the last observation was built from.
  Vec3 sensed_position_ = Vec3::Zero();
  UnitQuaternion sensed_orientation_;
  ActionCommand command_;
  Action prev_action_{};
  Array4 applied_thrusts_{};
  Array4 applied_joint_targets_{};
  int step_ = 0;
  long long physics_ticks_ = 0;
};

}  // namespace tiltrl

#endif  // TILTRL_ENVIRONMENT_H_
