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

#include "tiltrl/gae.h"

#include <cmath>

#include "tiltrl/error.h"

namespace tiltrl {

void ComputeGae(const std::vector<double>& rewards,
                const std::vector<double>& values,
                const std::vector<uint8_t>& dones, double bootstrap,
                double gamma, double lambda, std::vector<double>* advantages,
                std::vector<double>* returns) {
  const size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "GAE sequences are misaligned");
  }
  advantages->assign(n, 0.0);
  returns->assign(n, 0.0);
  double next_value = bootstrap;
  double next_advantage = 0.0;
  for (size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * next_value * live - values[k];
    next_advantage = delta + gamma * lambda * live * next_advantage;
    (*advantages)[k] = next_advantage;
    (*returns)[k] = next_advantage + values[k];
    next_value = values[k];
  }
}

void ComputeGae(const Eigen::MatrixXd& rewards, const Eigen::MatrixXd& values,
                const Eigen::MatrixXd& dones, const Eigen::VectorXd& bootstrap,
                double gamma, double lambda, Eigen::MatrixXd* advantages,
                Eigen::MatrixXd* returns) {
  const Eigen::Index steps = rewards.rows();
  const Eigen::Index envs = rewards.cols();
  if (values.rows() != steps || values.cols() != envs ||
      dones.rows() != steps || dones.cols() != envs ||
      bootstrap.size() != envs) {
    throw Error(ErrorCode::kInvalidArgument, "GAE batch is misaligned");
  }
  advantages->resize(steps, envs);
  Eigen::RowVectorXd next_value = bootstrap.transpose();
  Eigen::RowVectorXd next_advantage = Eigen::RowVectorXd::Zero(envs);
  for (Eigen::Index t = steps; t-- > 0;) {
    const Eigen::RowVectorXd live = 1.0 - dones.row(t).array();
    const Eigen::RowVectorXd delta =
        rewards.row(t).array() + gamma * next_value.array() * live.array() -
        values.row(t).array();
    next_advantage =
        delta.array() + gamma * lambda * live.array() * next_advantage.array();
    advantages->row(t) = next_advantage;
    next_value = values.row(t);
  }
  *returns = *advantages + values;
}

void NormalizeAdvantages(Eigen::Ref<Eigen::VectorXd> advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  advantages.array() -= mean;
  const double std_dev =
      std::sqrt(advantages.squaredNorm() / static_cast<double>(advantages.size()));
  advantages /= std_dev + 1e-8;
}

}  // namespace tiltrl
