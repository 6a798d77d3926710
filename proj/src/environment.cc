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

#include "tiltrl/environment.h"

#include <algorithm>
#include <cmath>

#include "tiltrl/error.h"
#include "tiltrl/random.h"

namespace tiltrl {
namespace {

// Golden-ratio sequence: spreads continuation environments evenly over the
// index range without aliasing with the index-modulo-4 joint strata.
constexpr double kGoldenFraction = 0.6180339887498949;

void WriteNoise(KeyValueConfig* config, const std::string& key,
                const NoiseSpec& spec) {
  config->Set(key, std::vector<double>{spec.bias, spec.noise});
}

void ReadNoise(const KeyValueConfig& config, const std::string& key,
               NoiseSpec* spec) {
  std::array<double, 2> values{spec->bias, spec->noise};
  config.ReadFixed(key, &values);
  spec->bias = values[0];
  spec->noise = values[1];
}

void WriteDelay(KeyValueConfig* config, const std::string& key,
                const DelayRange& range) {
  config->Set(key, std::vector<double>{static_cast<double>(range.min),
                                       static_cast<double>(range.max)});
}

void ReadDelay(const KeyValueConfig& config, const std::string& key,
               DelayRange* range) {
  std::array<double, 2> values{static_cast<double>(range->min),
                               static_cast<double>(range->max)};
  config.ReadFixed(key, &values);
  range->min = static_cast<int>(values[0]);
  range->max = static_cast<int>(values[1]);
  if (range->min < 0 || range->max < range->min) {
    throw Error(ErrorCode::kInvalidArgument, "invalid delay range " + key);
  }
}

template <typename T>
void WriteSix(std::array<double, 41>* out, int offset, const T& six) {
  for (int k = 0; k < 6; ++k) (*out)[offset + k] = six.values[k];
}

}  // namespace

RandomizationConfig RandomizationConfig::Disabled() {
  RandomizationConfig config;
  config.dynamics = false;
  config.observation_noise = false;
  config.latency = false;
  return config;
}

double EnvConfig::EffectiveHoverThrust() const {
  return hover_thrust > 0.0 ? hover_thrust : physical.HoverThrust();
}

EnvConfig EnvConfig::FromConfig(const KeyValueConfig& config) {
  EnvConfig c;
  c.physical = PhysicalParams::FromConfig(config);
  c.servo = JointServo::FromConfig(config);
  config.Read("control_dt", &c.control_dt);
  config.Read("physics_substeps", &c.physics_substeps);
  config.Read("joint_scale", &c.joint_scale);
  config.Read("thrust_scale", &c.thrust_scale);
  config.Read("hover_thrust", &c.hover_thrust);
  config.ReadFixed("target_min", &c.target_min);
  config.ReadFixed("target_max", &c.target_max);
  config.ReadFixed("spawn_position", &c.spawn_position);
  config.Read("initial_orientation_range", &c.initial_orientation_range);
  config.Read("target_orientation_range", &c.target_orientation_range);
  config.Read("joint_strata", &c.joint_strata);
  config.Read("max_episode_steps", &c.max_episode_steps);
  config.Read("safety_radius", &c.safety_radius);
  config.Read("continuation_fraction", &c.continuation_fraction);
  config.Read("servo_reaction", &c.servo_reaction);
  if (config.Has("task")) {
    const std::string& task = config.GetString("task");
    if (task == "pose") {
      c.task = TaskMode::kPoseReaching;
    } else if (task == "hover") {
      c.task = TaskMode::kHover;
    } else {
      throw Error(ErrorCode::kParse, "unknown task '" + task + "'");
    }
  }
  config.ReadFixed("reward_weights", &c.reward.weights);
  config.Read("gate_thrust_limit", &c.reward.gate_thrust_limit);

  RandomizationConfig& r = c.randomization;
  config.Read("rand_dynamics", &r.dynamics);
  config.ReadFixed("rand_mass_scale", &r.mass_scale);
  config.ReadFixed("rand_inertia_scale", &r.inertia_scale);
  config.Read("rand_com_bias", &r.com_bias);
  config.Read("rand_observation_noise", &r.observation_noise);
  ReadNoise(config, "noise_position", &r.position);
  ReadNoise(config, "noise_orientation_deg", &r.orientation_deg);
  ReadNoise(config, "noise_linear_velocity", &r.linear_velocity);
  ReadNoise(config, "noise_angular_velocity", &r.angular_velocity);
  ReadNoise(config, "noise_joint_position_deg", &r.joint_position_deg);
  config.Read("rand_latency", &r.latency);
  ReadDelay(config, "delay_action", &r.action_delay);
  ReadDelay(config, "delay_velocity", &r.velocity_delay);
  ReadDelay(config, "delay_joint", &r.joint_delay);

  if (!(c.control_dt > 0.0) || c.physics_substeps < 1 ||
      c.max_episode_steps < 1 || !(c.safety_radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid environment timing");
  }
  return c;
}

void EnvConfig::WriteTo(KeyValueConfig* config) const {
  physical.WriteTo(config);
  servo.WriteTo(config);
  config->Set("control_dt", control_dt);
  config->Set("physics_substeps", physics_substeps);
  config->Set("joint_scale", joint_scale);
  config->Set("thrust_scale", thrust_scale);
  config->Set("hover_thrust", hover_thrust);
  config->SetFixed("target_min", target_min);
  config->SetFixed("target_max", target_max);
  config->SetFixed("spawn_position", spawn_position);
  config->Set("initial_orientation_range", initial_orientation_range);
  config->Set("target_orientation_range", target_orientation_range);
  config->Set("joint_strata", joint_strata);
  config->Set("max_episode_steps", max_episode_steps);
  config->Set("safety_radius", safety_radius);
  config->Set("continuation_fraction", continuation_fraction);
  config->Set("servo_reaction", servo_reaction);
  config->Set("task", std::string(task == TaskMode::kHover ? "hover" : "pose"));
  config->SetFixed("reward_weights", reward.weights);
  config->Set("gate_thrust_limit", reward.gate_thrust_limit);

  const RandomizationConfig& r = randomization;
  config->Set("rand_dynamics", r.dynamics);
  config->SetFixed("rand_mass_scale", r.mass_scale);
  config->SetFixed("rand_inertia_scale", r.inertia_scale);
  config->Set("rand_com_bias", r.com_bias);
  config->Set("rand_observation_noise", r.observation_noise);
  WriteNoise(config, "noise_position", r.position);
  WriteNoise(config, "noise_orientation_deg", r.orientation_deg);
  WriteNoise(config, "noise_linear_velocity", r.linear_velocity);
  WriteNoise(config, "noise_angular_velocity", r.angular_velocity);
  WriteNoise(config, "noise_joint_position_deg", r.joint_position_deg);
  config->Set("rand_latency", r.latency);
  WriteDelay(config, "delay_action", r.action_delay);
  WriteDelay(config, "delay_velocity", r.velocity_delay);
  WriteDelay(config, "delay_joint", r.joint_delay);
}

ActionCommand MapAction(const Action& raw, double joint_scale,
                        double thrust_scale, double hover_thrust,
                        double joint_limit, double thrust_limit) {
  ActionCommand command;
  command.raw = raw;
  for (int i = 0; i < kNumRotors; ++i) {
    const double q = joint_scale * raw[i];
    const double f = thrust_scale * raw[kNumRotors + i] + hover_thrust;
    command.joint_targets_unclamped[i] = q;
    command.joint_targets[i] = std::clamp(q, -joint_limit, joint_limit);
    command.thrust_targets_unclamped[i] = f;
    command.thrust_targets[i] = std::clamp(f, 0.0, thrust_limit);
  }
  return command;
}

std::string_view TerminationReasonName(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kNone:
      return "none";
    case TerminationReason::kTimeOut:
      return "time_out";
    case TerminationReason::kSafety:
      return "safety";
    case TerminationReason::kNonFinite:
      return "non_finite";
  }
  return "unknown";
}

Termination CheckTermination(const RobotState& state, const TargetPose& target,
                             int step, int max_steps, double safety_radius) {
  if (!state.IsFinite()) return {true, TerminationReason::kNonFinite};
  if ((state.position - target.position).norm() > safety_radius) {
    return {true, TerminationReason::kSafety};
  }
  if (step >= max_steps) return {true, TerminationReason::kTimeOut};
  return {};
}

TiltEnv::TiltEnv(const EnvConfig& config, int env_index, uint64_t seed)
    : config_(config),
      env_index_(env_index),
      hover_thrust_(config.EffectiveHoverThrust()),
      rng_(MixSeed(seed, static_cast<uint64_t>(env_index))) {
  config_.physical.Validate();
  const double phase = std::fmod(env_index * kGoldenFraction, 1.0);
  continues_on_timeout_ = phase < config_.continuation_fraction;
  Reset();
}

double TiltEnv::Uniform(double lo, double hi) {
  return UniformRange(rng_, lo, hi);
}

int TiltEnv::UniformInt(int lo, int hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng_() % span);
}

Vec3 TiltEnv::UniformVec(double amplitude) {
  const double x = Uniform(-amplitude, amplitude);
  const double y = Uniform(-amplitude, amplitude);
  const double z = Uniform(-amplitude, amplitude);
  return {x, y, z};
}

double TiltEnv::sim_time() const {
  return static_cast<double>(physics_ticks_) * config_.PhysicsDt();
}

void TiltEnv::SampleLatents() {
  const RandomizationConfig& r = config_.randomization;
  EpisodeLatents latents;
  latents.params = config_.physical;
  if (r.dynamics) {
    latents.params.mass *= Uniform(r.mass_scale[0], r.mass_scale[1]);
    for (int k = 0; k < 3; ++k) {
      latents.params.inertia_diag[k] *=
          Uniform(r.inertia_scale[0], r.inertia_scale[1]);
    }
    latents.params.com_offset += UniformVec(r.com_bias);
  }
  if (config_.task == TaskMode::kPoseReaching && config_.joint_strata) {
    latents.stratum = env_index_ % 4;
  } else {
    latents.stratum = 1;
  }
  if (r.latency) {
    latents.action_joint_delay = UniformInt(r.action_delay.min, r.action_delay.max);
    latents.action_thrust_delay =
        UniformInt(r.action_delay.min, r.action_delay.max);
    latents.linear_velocity_delay =
        UniformInt(r.velocity_delay.min, r.velocity_delay.max);
    latents.angular_velocity_delay =
        UniformInt(r.velocity_delay.min, r.velocity_delay.max);
    latents.joint_delay = UniformInt(r.joint_delay.min, r.joint_delay.max);
  }
  if (r.observation_noise) {
    latents.position_bias = UniformVec(r.position.bias);
    latents.orientation_bias = UniformVec(r.orientation_deg.bias * kDegToRad);
    latents.linear_velocity_bias = UniformVec(r.linear_velocity.bias);
    latents.angular_velocity_bias = UniformVec(r.angular_velocity.bias);
    for (double& b : latents.joint_bias) {
      b = Uniform(-r.joint_position_deg.bias, r.joint_position_deg.bias) *
          kDegToRad;
    }
  }
  latents_ = latents;
}

void TiltEnv::SampleTarget() {
  if (config_.task == TaskMode::kHover) {
    target_.position = config_.spawn_position;
    target_.orientation = UnitQuaternion::Identity();
  } else {
    for (int k = 0; k < 3; ++k) {
      target_.position[k] = Uniform(config_.target_min[k], config_.target_max[k]);
    }
    target_.orientation =
        SampleUniformAxisAngle(rng_, config_.target_orientation_range);
  }
  target_euler_ = QuatToEuler(target_.orientation);
}

void TiltEnv::ResetDelayLines() {
  joint_command_delay_.Reset(latents_.action_joint_delay, command_.joint_targets);
  thrust_command_delay_.Reset(latents_.action_thrust_delay,
                              command_.thrust_targets);
  linear_velocity_delay_.Reset(latents_.linear_velocity_delay,
                               state_.BodyLinearVelocity());
  angular_velocity_delay_.Reset(latents_.angular_velocity_delay,
                                state_.angular_velocity);
  joint_observation_delay_.Reset(latents_.joint_delay, state_.joint_positions);
}

void TiltEnv::Reset() {
  SampleLatents();
  state_ = RobotState{};
  state_.position = config_.spawn_position;
  if (config_.task == TaskMode::kPoseReaching) {
    state_.orientation =
        SampleUniformAxisAngle(rng_, config_.initial_orientation_range);
    static constexpr double kLevels[3] = {-kPi, 0.0, kPi};
    for (int i = 0; i < kNumRotors; ++i) {
      switch (latents_.stratum) {
        case 0:
          state_.joint_positions[i] = -kPi;
          break;
        case 1:
          state_.joint_positions[i] = 0.0;
          break;
        case 2:
          state_.joint_positions[i] = kPi;
          break;
        default:
          state_.joint_positions[i] = kLevels[UniformInt(0, 2)];
          break;
      }
    }
  }
  SampleTarget();
  step_ = 0;
  physics_ticks_ = 0;
  prev_action_.fill(0.0);
  command_ = MapAction(prev_action_, config_.joint_scale, config_.thrust_scale,
                       hover_thrust_, config_.physical.joint_limit,
                       config_.physical.thrust_limit);
  applied_thrusts_ = command_.thrust_targets;
  applied_joint_targets_ = command_.joint_targets;
  ResetDelayLines();
  observation_ = BuildObservation();
}

void TiltEnv::ResampleTarget() {
  SampleTarget();
  step_ = 0;
  observation_ = BuildObservation();
}

void TiltEnv::SetState(const RobotState& state) {
  state_ = state;
  ResetDelayLines();
  observation_ = BuildObservation();
}

void TiltEnv::SetTarget(const TargetPose& target) {
  target_ = target;
  target_euler_ = QuatToEuler(target_.orientation);
  WriteTargetFields(&observation_);
}

void TiltEnv::SetPhysicalParams(const PhysicalParams& params) {
  params.Validate();
  latents_.params = params;
}

void TiltEnv::SetDisturbance(const DisturbanceSchedule& schedule) {
  disturbance_ = schedule;
}

Observation TiltEnv::BuildObservation() {
  const RandomizationConfig& r = config_.randomization;
  Vec3 linear_velocity =
      linear_velocity_delay_.PushPop(state_.BodyLinearVelocity());
  Vec3 angular_velocity = angular_velocity_delay_.PushPop(state_.angular_velocity);
  Array4 joints = joint_observation_delay_.PushPop(state_.joint_positions);
  Vec3 position = state_.position;
  UnitQuaternion orientation = state_.orientation;

  if (r.observation_noise) {
    linear_velocity += latents_.linear_velocity_bias +
                       UniformVec(r.linear_velocity.noise);
    angular_velocity += latents_.angular_velocity_bias +
                        UniformVec(r.angular_velocity.noise);
    position += latents_.position_bias + UniformVec(r.position.noise);
    const Vec3 angles = QuatToEuler(orientation).AsVector() +
                        latents_.orientation_bias +
                        UniformVec(r.orientation_deg.noise * kDegToRad);
    orientation = EulerToQuat({angles.x(), angles.y(), angles.z()});
    for (int i = 0; i < kNumRotors; ++i) {
      joints[i] += latents_.joint_bias[i] +
                   Uniform(-r.joint_position_deg.noise,
                           r.joint_position_deg.noise) *
                       kDegToRad;
    }
  }

  Observation o;
  auto& v = o.values;
  for (int k = 0; k < 3; ++k) {
    v[Observation::kLinearVelocity + k] = linear_velocity[k];
    v[Observation::kAngularVelocity + k] = angular_velocity[k];
  }
  sensed_position_ = position;
  sensed_orientation_ = orientation;
  WriteTargetFields(&o);
  const SixDRotation current = QuatToSixD(orientation);
  for (int k = 0; k < 6; ++k) v[Observation::kOrientation + k] = current.values[k];
  for (int i = 0; i < kNumRotors; ++i) v[Observation::kJointPositions + i] = joints[i];
  for (int k = 0; k < kActionSize; ++k) {
    v[Observation::kPreviousAction + k] = prev_action_[k];
  }
  return o;
}

void TiltEnv::WriteTargetFields(Observation* o) const {
  auto& v = o->values;
  const Vec3 target_body =
      sensed_orientation_.InverseRotate(target_.position - sensed_position_);
  for (int k = 0; k < 3; ++k) v[Observation::kTargetPosition + k] = target_body[k];
  const SixDRotation desired = QuatToSixD(target_.orientation);
  for (int k = 0; k < 6; ++k) {
    v[Observation::kTargetOrientation + k] = desired.values[k];
  }
}

CriticState TiltEnv::BuildCriticState() const {
  CriticState s;
  auto& v = s.values;
  const Vec3 linear_velocity = state_.BodyLinearVelocity();
  for (int k = 0; k < 3; ++k) {
    v[CriticState::kLinearVelocity + k] = linear_velocity[k];
    v[CriticState::kAngularVelocity + k] = state_.angular_velocity[k];
  }
  const Vec3 target_body =
      state_.orientation.InverseRotate(target_.position - state_.position);
  for (int k = 0; k < 3; ++k) v[CriticState::kTargetPosition + k] = target_body[k];
  WriteSix(&v, CriticState::kOrientation, QuatToSixD(state_.orientation));
  WriteSix(&v, CriticState::kTargetOrientation, QuatToSixD(target_.orientation));
  const PhysicalParams& params = latents_.params;
  for (int i = 0; i < kNumRotors; ++i) {
    v[CriticState::kJointPositions + i] = state_.joint_positions[i];
    v[CriticState::kRotorTorques + i] = params.rotor_spin_signs[i] *
                                        params.torque_thrust_ratio *
                                        applied_thrusts_[i];
    v[CriticState::kRotorThrusts + i] = applied_thrusts_[i];
  }
  for (int k = 0; k < kActionSize; ++k) {
    v[CriticState::kPreviousAction + k] = prev_action_[k];
  }
  return s;
}

RewardInputs TiltEnv::MakeRewardInputs(const ActionCommand& command,
                                       const Array4& prev_joint_velocities) const {
  RewardInputs in;
  in.position_error = (state_.position - target_.position).norm();
  in.orientation_error =
      EulerError(QuatToEuler(state_.orientation), target_euler_).norm();
  in.linear_speed = state_.linear_velocity.norm();
  in.angular_speed = state_.angular_velocity.norm();
  in.joint_targets = command.joint_targets_unclamped;
  in.thrust_targets = command.thrust_targets_unclamped;
  in.applied_thrusts = applied_thrusts_;
  in.joint_velocities = state_.joint_velocities;
  in.prev_joint_velocities = prev_joint_velocities;
  in.body_z = BodyZAxis(state_.orientation);
  in.target_body_z = BodyZAxis(target_.orientation);
  in.joint_limit = config_.physical.joint_limit;
  in.thrust_limit = config_.physical.thrust_limit;
  return in;
}

StepResult TiltEnv::Step(const Action& action) {
  const ActionCommand previous = command_;
  command_ = MapAction(action, config_.joint_scale, config_.thrust_scale,
                       hover_thrust_, config_.physical.joint_limit,
                       config_.physical.thrust_limit);
  applied_joint_targets_ = joint_command_delay_.PushPop(command_.joint_targets);
  applied_thrusts_ = thrust_command_delay_.PushPop(command_.thrust_targets);
  const Array4 prev_joint_velocities = state_.joint_velocities;

  bool non_finite = false;
  const double dt = config_.PhysicsDt();
  const PhysicalParams& params = latents_.params;
  try {
    for (int s = 0; s < config_.physics_substeps; ++s) {
      RobotState next = state_;
      Array4 joint_torques{};
      for (int i = 0; i < kNumRotors; ++i) {
        const JointStepResult joint =
            JointStep(config_.servo,
                      {state_.joint_positions[i], state_.joint_velocities[i]},
                      applied_joint_targets_[i], dt);
        next.joint_positions[i] = joint.state.position;
        next.joint_velocities[i] = joint.state.velocity;
        joint_torques[i] = joint.mean_torque;
      }
      BodyWrench wrench =
          RotorWrench(params, next.joint_positions, applied_thrusts_);
      if (config_.servo_reaction) {
        for (int i = 0; i < kNumRotors; ++i) {
          wrench.torque -= joint_torques[i] * params.TiltAxis(i);
        }
      }
      const WorldWrench external = disturbance_.At(sim_time());
      state_ = tiltrl::Step(params, next, wrench, external, dt);
      ++physics_ticks_;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonFiniteState &&
        e.code() != ErrorCode::kOutOfRangeThrust) {
      throw;
    }
    non_finite = true;
  }
  ++step_;
  prev_action_ = action;

  StepResult result;
  result.observation = observation_ = BuildObservation();
  result.critic = BuildCriticState();
  RewardInputs reward_inputs = MakeRewardInputs(command_, prev_joint_velocities);
  reward_inputs.prev_joint_targets = previous.joint_targets_unclamped;
  reward_inputs.prev_thrust_targets = previous.thrust_targets_unclamped;
  result.reward = ComputeReward(reward_inputs, config_.reward);
  if (non_finite) {
    result.termination = {true, TerminationReason::kNonFinite};
  } else {
    result.termination =
        CheckTermination(state_, target_, step_, config_.max_episode_steps,
                         config_.safety_radius);
  }
  return result;
}

}  // namespace tiltrl
