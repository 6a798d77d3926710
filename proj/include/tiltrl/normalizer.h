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

#ifndef TILTRL_NORMALIZER_H_
#define TILTRL_NORMALIZER_H_

#include <Eigen/Core>

namespace tiltrl {

// Running per-feature mean and variance (Chan et al. parallel merge).
// Normalize() maps x to (x - mean) / sqrt(var + eps), clipped to +-clip.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int size, double epsilon = 1e-8,
                             double clip = 10.0);

  int size() const { return static_cast<int>(mean_.size()); }
  // Columns of `batch` are samples.
  void Update(const Eigen::MatrixXd& batch);
  Eigen::MatrixXd Normalize(const Eigen::MatrixXd& batch) const;

  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& variance() const { return var_; }
  void SetState(double count, const Eigen::VectorXd& mean,
                const Eigen::VectorXd& variance);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd var_;
  double count_ = 0.0;
  double epsilon_ = 1e-8;
  double clip_ = 10.0;
};

}  // namespace tiltrl

#endif  // TILTRL_NORMALIZER_H_
