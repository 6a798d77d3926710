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

// Clipped-surrogate PPO with Adam and a KL-driven learning rate.

#ifndef TILTRL_PPO_H_
#define TILTRL_PPO_H_

#include <random>
#include <vector>

#include <Eigen/Core>

#include "tiltrl/actor_critic.h"
#include "tiltrl/kv_config.h"

namespace tiltrl {

struct PpoConfig {
  double clip = 0.2;
  double entropy_coef = 5e-4;
  double value_coef = 1.0;
  double gamma = 0.99;
  double lambda = 0.95;
  double desired_kl = 0.01;
  int epochs = 5;
  int minibatches = 4;
  double max_grad_norm = 1.0;
  double learning_rate = 1e-3;
  double min_learning_rate = 1e-6;
  double max_learning_rate = 1e-2;
  bool adaptive_lr = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  static PpoConfig FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

// Flattened rollout, one column (or entry) per sample.
struct RolloutBatch {
  CriticBatch critic;            // raw critic states
  ObservationBatch observations;  // raw observations
  Eigen::MatrixXd actions;       // kActionSize x S
  Eigen::MatrixXd old_means;     // kActionSize x S
  Eigen::VectorXd old_log_std;   // kActionSize
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd advantages;    // normalized
  Eigen::VectorXd returns;

  int size() const { return static_cast<int>(old_log_probs.size()); }
};

struct PpoLoss {
  double total = 0.0;
  double surrogate = 0.0;  // -mean(min(rho A, clip(rho) A))
  double value = 0.0;      // mean squared error
  double entropy = 0.0;
  double kl = 0.0;         // mean KL(old || new)
  double clip_fraction = 0.0;
};

// Total loss = surrogate - entropy_coef * entropy + value_coef * value on the
// samples in `indices`, evaluated at `params`. When `grad` is not null it
// receives dLoss/dparams (overwritten).
PpoLoss EvaluatePpoLoss(const ActorCritic& net, const Eigen::VectorXd& params,
                        const RolloutBatch& batch,
                        const std::vector<int>& indices,
                        const PpoConfig& config, Eigen::VectorXd* grad);

// The per-sample surrogate min(rho A, clamp(rho, 1 - clip, 1 + clip) A).
double ClippedSurrogate(double ratio, double advantage, double clip);

// Scales `grad` so its Euclidean norm is at most `max_norm`; returns the norm
// before clipping.
double ClipGradNorm(Eigen::VectorXd* grad, double max_norm);

class Adam {
 public:
  Adam() = default;
  Adam(int size, double beta1, double beta2, double epsilon);

  void Step(Eigen::VectorXd* params, const Eigen::VectorXd& grad, double lr);

  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }
  long long steps() const { return t_; }
  void SetState(long long steps, const Eigen::VectorXd& m,
                const Eigen::VectorXd& v);

 private:
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long long t_ = 0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double epsilon_ = 1e-8;
};

struct UpdateStats {
  double surrogate = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
  double learning_rate = 0.0;
};

// Runs the epochs x minibatches loop. `learning_rate` is read and adapted in
// place. On a non-finite loss or gradient the parameters and optimizer state
// are restored to their values on entry and kNonFiniteLoss is thrown naming
// the epoch and minibatch.
UpdateStats PpoUpdate(ActorCritic* net, Adam* adam, const RolloutBatch& batch,
                      const PpoConfig& config, double* learning_rate,
                      std::mt19937_64& rng);

}  // namespace tiltrl

#endif  // TILTRL_PPO_H_
