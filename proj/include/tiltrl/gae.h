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

// Generalized advantage estimation.

#ifndef TILTRL_GAE_H_
#define TILTRL_GAE_H_

#include <vector>

#include <Eigen/Core>

namespace tiltrl {

// One sequence: delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t with
// V_T = `bootstrap`, A_t = delta_t + gamma lambda (1 - done_t) A_{t+1},
// returns = advantages + values. Not normalized.
void ComputeGae(const std::vector<double>& rewards,
                const std::vector<double>& values,
                const std::vector<uint8_t>& dones, double bootstrap,
                double gamma, double lambda, std::vector<double>* advantages,
                std::vector<double>* returns);

// Batched form over N parallel sequences. Matrices are T x N (row t is time
// step t for every environment); `bootstrap` has N entries.
void ComputeGae(const Eigen::MatrixXd& rewards, const Eigen::MatrixXd& values,
                const Eigen::MatrixXd& dones, const Eigen::VectorXd& bootstrap,
                double gamma, double lambda, Eigen::MatrixXd* advantages,
                Eigen::MatrixXd* returns);

// In place: zero mean, unit (population) variance.
void NormalizeAdvantages(Eigen::Ref<Eigen::VectorXd> advantages);

}  // namespace tiltrl

#endif  // TILTRL_GAE_H_
