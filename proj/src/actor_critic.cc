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

#include "tiltrl/actor_critic.h"

#include <random>

#include "tiltrl/environment.h"
#include "tiltrl/error.h"
#include "tiltrl/random.h"

namespace tiltrl {

ActorCritic::ActorCritic(const NetworkConfig& config, uint64_t seed)
    : config_(config),
      actor_(Observation::kSize, config.actor_hidden, kActionSize),
      critic_(CriticState::kSize, config.critic_hidden, 1),
      obs_norm_(Observation::kSize),
      critic_norm_(CriticState::kSize) {
  params_.resize(actor_.num_params() + kActionSize + critic_.num_params());
  std::mt19937_64 rng(MixSeed(seed, 0x6e657477ULL));
  actor_.Initialize(rng, config.hidden_gain, config.actor_output_gain,
                    params_.data());
  params_.segment(log_std_offset(), kActionSize).setConstant(config.init_log_std);
  critic_.Initialize(rng, config.hidden_gain, config.critic_output_gain,
                     params_.data() + critic_offset());
}

Eigen::MatrixXd ActorCritic::ActorInput(const ObservationBatch& obs) const {
  if (obs.values.rows() != Observation::kSize) {
    throw Error(ErrorCode::kInvalidArgument, "observation batch has wrong size");
  }
  return config_.normalize_inputs ? obs_norm_.Normalize(obs.values) : obs.values;
}

Eigen::MatrixXd ActorCritic::CriticInput(const CriticBatch& critic) const {
  if (critic.values.rows() != CriticState::kSize) {
    throw Error(ErrorCode::kInvalidArgument, "critic batch has wrong size");
  }
  return config_.normalize_inputs ? critic_norm_.Normalize(critic.values)
                                  : critic.values;
}

PolicyOutput ActorCritic::Policy(const ObservationBatch& obs) const {
  PolicyOutput out;
  out.means = actor_.Forward(params_.data(), ActorInput(obs), nullptr);
  out.log_std = log_std();
  return out;
}

Eigen::VectorXd ActorCritic::Value(const CriticBatch& critic) const {
  return critic_
      .Forward(params_.data() + critic_offset(), CriticInput(critic), nullptr)
      .row(0)
      .transpose();
}

Eigen::VectorXd ActorCritic::log_std() const {
  return params_.segment(log_std_offset(), action_size());
}

}  // namespace tiltrl
