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

// Batched driver over independent TiltEnv instances with automatic resets.

#ifndef TILTRL_VEC_ENV_H_
#define TILTRL_VEC_ENV_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tiltrl/environment.h"

namespace tiltrl {

struct VecStepResult {
  Eigen::VectorXd rewards;
  // 1 when the episode ended on this step (any reason).
  std::vector<uint8_t> dones;
  // 1 when the episode ended by time-out only; the critic may bootstrap.
  std::vector<uint8_t> time_outs;
  // Critic state of the final pre-reset state, valid where time_outs is set.
  Eigen::MatrixXd terminal_critic;
  // Returns and lengths of episodes that finished on this step.
  std::vector<double> finished_returns;
  std::vector<int> finished_lengths;
};

class VecEnv {
 public:
  // Environment i is TiltEnv(config, i, seed). num_threads <= 1 steps
  // sequentially; the results are identical either way.
  VecEnv(const EnvConfig& config, int num_envs, uint64_t seed,
         int num_threads = 1);

  int size() const { return static_cast<int>(envs_.size()); }

  // Observation::kSize x N and CriticState::kSize x N, column i = env i.
  const Eigen::MatrixXd& observations() const { return observations_; }
  const Eigen::MatrixXd& critic_states() const { return critic_states_; }

  // `actions` is kActionSize x N. Finished environments are reset (or, for
  // continuation environments that timed out, given a new target) before
  // their next observation is stored.
  void Step(const Eigen::MatrixXd& actions, VecStepResult* result);

  TiltEnv& env(int i) { return envs_[i]; }
  const TiltEnv& env(int i) const { return envs_[i]; }

 private:
  void Store(int i, const Observation& o, const CriticState& c);

  std::vector<TiltEnv> envs_;
  int num_threads_ = 1;
  Eigen::MatrixXd observations_;
  Eigen::MatrixXd critic_states_;
  std::vector<double> running_returns_;
  std::vector<int> running_lengths_;
};

}  // namespace tiltrl

#endif  // TILTRL_VEC_ENV_H_
