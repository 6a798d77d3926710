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

// Diagonal Gaussian action distribution helpers. Means are kActionSize x N;
// the log standard deviations are shared by every sample.

#ifndef TILTRL_GAUSSIAN_H_
#define TILTRL_GAUSSIAN_H_

#include <random>

#include <Eigen/Core>

namespace tiltrl {

// Per-column log density of `actions`.
Eigen::VectorXd GaussianLogProb(const Eigen::MatrixXd& means,
                                const Eigen::VectorXd& log_std,
                                const Eigen::MatrixXd& actions);

// sum_i (log sigma_i + 0.5 log(2 pi e)).
double GaussianEntropy(const Eigen::VectorXd& log_std);

Eigen::MatrixXd GaussianSample(const Eigen::MatrixXd& means,
                               const Eigen::VectorXd& log_std,
                               std::mt19937_64& rng);

// Per-column KL(old || new) between diagonal Gaussians.
Eigen::VectorXd GaussianKl(const Eigen::MatrixXd& old_means,
                           const Eigen::VectorXd& old_log_std,
                           const Eigen::MatrixXd& new_means,
                           const Eigen::VectorXd& new_log_std);

}  // namespace tiltrl

#endif  // TILTRL_GAUSSIAN_H_
