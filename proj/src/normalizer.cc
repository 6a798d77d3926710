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

#include "tiltrl/normalizer.h"

#include "tiltrl/error.h"

namespace tiltrl {

RunningNormalizer::RunningNormalizer(int size, double epsilon, double clip)
    : mean_(Eigen::VectorXd::Zero(size)),
      var_(Eigen::VectorXd::Ones(size)),
      epsilon_(epsilon),
      clip_(clip) {}

void RunningNormalizer::Update(const Eigen::MatrixXd& batch) {
  if (batch.rows() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "normalizer size mismatch");
  }
  const double n = static_cast<double>(batch.cols());
  if (n == 0.0) return;
  const Eigen::VectorXd batch_mean = batch.rowwise().mean();
  const Eigen::VectorXd batch_var =
      (batch.colwise() - batch_mean).array().square().rowwise().mean();
  if (count_ == 0.0) {
    mean_ = batch_mean;
    var_ = batch_var;
    count_ = n;
    return;
  }
  const double total = count_ + n;
  const Eigen::VectorXd delta = batch_mean - mean_;
  mean_ += delta * (n / total);
  var_ = (var_ * count_ + batch_var * n +
          delta.array().square().matrix() * (count_ * n / total)) /
         total;
  count_ = total;
}

Eigen::MatrixXd RunningNormalizer::Normalize(const Eigen::MatrixXd& batch) const {
  const Eigen::ArrayXd inv = (var_.array() + epsilon_).rsqrt();
  return ((batch.colwise() - mean_).array().colwise() * inv)
      .cwiseMax(-clip_)
      .cwiseMin(clip_)
      .matrix();
}

void RunningNormalizer::SetState(double count, const Eigen::VectorXd& mean,
                                 const Eigen::VectorXd& variance) {
  if (mean.size() != size() || variance.size() != size()) {
    throw Error(ErrorCode::kCheckpointMismatch, "normalizer size mismatch");
  }
  count_ = count;
  mean_ = mean;
  var_ = variance;
}

}  // namespace tiltrl
