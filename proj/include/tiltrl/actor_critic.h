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

// Asymmetric actor-critic: the policy reads observations, the value function
// reads the privileged critic state. The two input kinds are distinct types
// so a critic batch can never reach the actor.

#ifndef TILTRL_ACTOR_CRITIC_H_
#define TILTRL_ACTOR_CRITIC_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tiltrl/mlp.h"
#include "tiltrl/normalizer.h"

namespace tiltrl {

struct NetworkConfig {
  std::vector<int> actor_hidden{512, 256, 128};
  std::vector<int> critic_hidden{512, 256, 128};
  double init_log_std = 0.0;
  double hidden_gain = 1.4142135623730951;
  double actor_output_gain = 0.01;
  double critic_output_gain = 1.0;
  bool normalize_inputs = true;
};

// Observation::kSize x N.
struct ObservationBatch {
  Eigen::MatrixXd values;
};

// CriticState::kSize x N.
struct CriticBatch {
  Eigen::MatrixXd values;
};

struct PolicyOutput {
  Eigen::MatrixXd means;    // kActionSize x N
  Eigen::VectorXd log_std;  // kActionSize
};

class ActorCritic {
 public:
  ActorCritic() = default;
  ActorCritic(const NetworkConfig& config, uint64_t seed);

  const NetworkConfig& config() const { return config_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }

  // Flat layout: actor weights | log std | critic weights.
  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }
  int num_params() const { return static_cast<int>(params_.size()); }
  int num_actor_params() const { return actor_.num_params() + action_size(); }
  int log_std_offset() const { return actor_.num_params(); }
  int critic_offset() const { return actor_.num_params() + action_size(); }
  int action_size() const { return actor_.output_size(); }

  RunningNormalizer& observation_normalizer() { return obs_norm_; }
  const RunningNormalizer& observation_normalizer() const { return obs_norm_; }
  RunningNormalizer& critic_normalizer() { return critic_norm_; }
  const RunningNormalizer& critic_normalizer() const { return critic_norm_; }

  // Normalized network inputs (identity when normalization is off).
  Eigen::MatrixXd ActorInput(const ObservationBatch& obs) const;
  Eigen::MatrixXd CriticInput(const CriticBatch& critic) const;

  // Deterministic forward pass of the policy head.
  PolicyOutput Policy(const ObservationBatch& obs) const;
  Eigen::VectorXd Value(const CriticBatch& critic) const;

  Eigen::VectorXd log_std() const;

 private:
  NetworkConfig config_;
  Mlp actor_;
  Mlp critic_;
  Eigen::VectorXd params_;
  RunningNormalizer obs_norm_;
  RunningNormalizer critic_norm_;
};

}  // namespace tiltrl

#endif  // TILTRL_ACTOR_CRITIC_H_
