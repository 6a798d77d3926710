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

#include "tiltrl/vec_env.h"

#include "tiltrl/error.h"
#include "tiltrl/parallel.h"

namespace tiltrl {

VecEnv::VecEnv(const EnvConfig& config, int num_envs, uint64_t seed,
               int num_threads)
    : num_threads_(num_threads),
      observations_(Observation::kSize, num_envs),
      critic_states_(CriticState::kSize, num_envs),
      running_returns_(num_envs, 0.0),
      running_lengths_(num_envs, 0) {
  if (num_envs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one environment");
  }
  envs_.reserve(num_envs);
  for (int i = 0; i < num_envs; ++i) envs_.emplace_back(config, i, seed);
  for (int i = 0; i < num_envs; ++i) {
    Store(i, envs_[i].observation(), envs_[i].BuildCriticState());
  }
}

void VecEnv::Store(int i, const Observation& o, const CriticState& c) {
  observations_.col(i) =
      Eigen::Map<const Eigen::VectorXd>(o.values.data(), Observation::kSize);
  critic_states_.col(i) =
      Eigen::Map<const Eigen::VectorXd>(c.values.data(), CriticState::kSize);
}

void VecEnv::Step(const Eigen::MatrixXd& actions, VecStepResult* result) {
  const int n = size();
  if (actions.rows() != kActionSize || actions.cols() != n) {
    throw Error(ErrorCode::kInvalidArgument, "action batch has wrong shape");
  }
  result->rewards.resize(n);
  result->dones.assign(n, 0);
  result->time_outs.assign(n, 0);
  result->terminal_critic.setZero(CriticState::kSize, n);
  result->finished_returns.clear();
  result->finished_lengths.clear();

  ParallelFor(n, num_threads_, [&](int i) {
    Action action;
    for (int k = 0; k < kActionSize; ++k) action[k] = actions(k, i);
    TiltEnv& env = envs_[i];
    const StepResult r = env.Step(action);
    result->rewards[i] = r.reward.total;
    running_returns_[i] += r.reward.total;
    running_lengths_[i] += 1;
    if (!r.termination.done) {
      Store(i, r.observation, r.critic);
      return;
    }
    result->dones[i] = 1;
    const bool time_out = r.termination.reason == TerminationReason::kTimeOut;
    if (time_out) {
      result->time_outs[i] = 1;
      result->terminal_critic.col(i) = Eigen::Map<const Eigen::VectorXd>(
          r.critic.values.data(), CriticState::kSize);
    }
    if (time_out && env.continues_on_timeout()) {
      env.ResampleTarget();
    } else {
      env.Reset();
    }
    Store(i, env.observation(), env.BuildCriticState());
  });

  // Episode bookkeeping in index order keeps the lists schedule-independent.
  for (int i = 0; i < n; ++i) {
    if (!result->dones[i]) continue;
    result->finished_returns.push_back(running_returns_[i]);
    result->finished_lengths.push_back(running_lengths_[i]);
    running_returns_[i] = 0.0;
    running_lengths_[i] = 0;
  }
}

}  // namespace tiltrl
