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

#include "tiltrl/gaussian.h"

#include <cmath>

#include "tiltrl/random.h"

namespace tiltrl {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

}  // namespace

Eigen::VectorXd GaussianLogProb(const Eigen::MatrixXd& means,
                                const Eigen::VectorXd& log_std,
                                const Eigen::MatrixXd& actions) {
  const Eigen::VectorXd inv_std = (-log_std.array()).exp();
  const Eigen::MatrixXd z = (actions - means).array().colwise() * inv_std.array();
  const double constant = -log_std.sum() - 0.5 * kLog2Pi * log_std.size();
  return (-0.5 * z.colwise().squaredNorm().array() + constant).transpose();
}

double GaussianEntropy(const Eigen::VectorXd& log_std) {
  return log_std.sum() + 0.5 * (kLog2Pi + 1.0) * log_std.size();
}

Eigen::MatrixXd GaussianSample(const Eigen::MatrixXd& means,
                               const Eigen::VectorXd& log_std,
                               std::mt19937_64& rng) {
  const Eigen::VectorXd std_dev = log_std.array().exp();
  Eigen::MatrixXd out(means.rows(), means.cols());
  for (int j = 0; j < means.cols(); ++j) {
    for (int i = 0; i < means.rows(); ++i) {
      out(i, j) = means(i, j) + std_dev[i] * StandardNormal(rng);
    }
  }
  return out;
}

Eigen::VectorXd GaussianKl(const Eigen::MatrixXd& old_means,
                           const Eigen::VectorXd& old_log_std,
                           const Eigen::MatrixXd& new_means,
                           const Eigen::VectorXd& new_log_std) {
  const Eigen::ArrayXd old_var = (2.0 * old_log_std.array()).exp();
  const Eigen::ArrayXd inv_new_var = (-2.0 * new_log_std.array()).exp();
  const double per_sample =
      (new_log_std - old_log_std).sum() +
      0.5 * (old_var * inv_new_var).sum() - 0.5 * old_log_std.size();
  const Eigen::MatrixXd diff = new_means - old_means;
  Eigen::VectorXd kl =
      0.5 * (diff.array().square().colwise() * inv_new_var).colwise().sum().transpose();
  kl.array() += per_sample;
  return kl;
}

}  // namespace tiltrl
