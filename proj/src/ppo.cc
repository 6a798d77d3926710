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

#include "tiltrl/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tiltrl/error.h"
#include "tiltrl/gaussian.h"
#include "tiltrl/random.h"

namespace tiltrl {
namespace {

Eigen::MatrixXd Gather(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) out.col(k) = m.col(idx[k]);
  return out;
}

Eigen::VectorXd Gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

}  // namespace

PpoConfig PpoConfig::FromConfig(const KeyValueConfig& config) {
  PpoConfig c;
  config.Read("ppo_clip", &c.clip);
  config.Read("ppo_entropy_coef", &c.entropy_coef);
  config.Read("ppo_value_coef", &c.value_coef);
  config.Read("ppo_gamma", &c.gamma);
  config.Read("ppo_lambda", &c.lambda);
  config.Read("ppo_desired_kl", &c.desired_kl);
  config.Read("ppo_epochs", &c.epochs);
  config.Read("ppo_minibatches", &c.minibatches);
  config.Read("ppo_max_grad_norm", &c.max_grad_norm);
  config.Read("ppo_learning_rate", &c.learning_rate);
  config.Read("ppo_min_learning_rate", &c.min_learning_rate);
  config.Read("ppo_max_learning_rate", &c.max_learning_rate);
  config.Read("ppo_adaptive_lr", &c.adaptive_lr);
  config.Read("ppo_adam_beta1", &c.adam_beta1);
  config.Read("ppo_adam_beta2", &c.adam_beta2);
  config.Read("ppo_adam_epsilon", &c.adam_epsilon);
  if (c.epochs < 1 || c.minibatches < 1 || !(c.clip > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid PPO settings");
  }
  return c;
}

void PpoConfig::WriteTo(KeyValueConfig* config) const {
  config->Set("ppo_clip", clip);
  config->Set("ppo_entropy_coef", entropy_coef);
  config->Set("ppo_value_coef", value_coef);
  config->Set("ppo_gamma", gamma);
  config->Set("ppo_lambda", lambda);
  config->Set("ppo_desired_kl", desired_kl);
  config->Set("ppo_epochs", epochs);
  config->Set("ppo_minibatches", minibatches);
  config->Set("ppo_max_grad_norm", max_grad_norm);
  config->Set("ppo_learning_rate", learning_rate);
  config->Set("ppo_min_learning_rate", min_learning_rate);
  config->Set("ppo_max_learning_rate", max_learning_rate);
  config->Set("ppo_adaptive_lr", adaptive_lr);
  config->Set("ppo_adam_beta1", adam_beta1);
  config->Set("ppo_adam_beta2", adam_beta2);
  config->Set("ppo_adam_epsilon", adam_epsilon);
}

double ClippedSurrogate(double ratio, double advantage, double clip) {
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
  return std::min(ratio * advantage, clipped * advantage);
}

double ClipGradNorm(Eigen::VectorXd* grad, double max_norm) {
  const double norm = grad->norm();
  if (norm > max_norm) *grad *= max_norm / norm;
  return norm;
}

PpoLoss EvaluatePpoLoss(const ActorCritic& net, const Eigen::VectorXd& params,
                        const RolloutBatch& batch,
                        const std::vector<int>& indices,
                        const PpoConfig& config, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(indices.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty minibatch");
  const double inv_n = 1.0 / n;
  const Mlp& actor = net.actor();
  const Mlp& critic = net.critic();
  const int action_size = net.action_size();

  const Eigen::MatrixXd obs =
      net.ActorInput({Gather(batch.observations.values, indices)});
  const Eigen::MatrixXd critic_in =
      net.CriticInput({Gather(batch.critic.values, indices)});
  const Eigen::MatrixXd actions = Gather(batch.actions, indices);
  const Eigen::MatrixXd old_means = Gather(batch.old_means, indices);
  const Eigen::VectorXd old_log_probs = Gather(batch.old_log_probs, indices);
  const Eigen::VectorXd advantages = Gather(batch.advantages, indices);
  const Eigen::VectorXd returns = Gather(batch.returns, indices);
  const Eigen::VectorXd log_std = params.segment(net.log_std_offset(), action_size);

  Mlp::Cache actor_cache;
  Mlp::Cache critic_cache;
  const Eigen::MatrixXd means = actor.Forward(
      params.data(), obs, grad != nullptr ? &actor_cache : nullptr);
  const Eigen::VectorXd values =
      critic
          .Forward(params.data() + net.critic_offset(), critic_in,
                   grad != nullptr ? &critic_cache : nullptr)
          .row(0)
          .transpose();
  const Eigen::VectorXd log_probs = GaussianLogProb(means, log_std, actions);

  PpoLoss loss;
  Eigen::VectorXd d_log_prob(n);  // dLoss/dlogpi per sample
  double surrogate_sum = 0.0;
  int clipped = 0;
  for (int k = 0; k < n; ++k) {
    const double ratio = std::exp(log_probs[k] - old_log_probs[k]);
    const double a = advantages[k];
    const double lo = 1.0 - config.clip;
    const double hi = 1.0 + config.clip;
    const double unclipped_term = ratio * a;
    const double clipped_term = std::clamp(ratio, lo, hi) * a;
    surrogate_sum += std::min(unclipped_term, clipped_term);
    if (ratio < lo || ratio > hi) ++clipped;
    // The unclipped branch carries the gradient when it is the minimum.
    d_log_prob[k] = unclipped_term <= clipped_term ? -inv_n * a * ratio : 0.0;
  }
  loss.surrogate = -surrogate_sum * inv_n;
  loss.entropy = GaussianEntropy(log_std);
  const Eigen::VectorXd value_error = values - returns;
  loss.value = value_error.squaredNorm() * inv_n;
  loss.total = loss.surrogate - config.entropy_coef * loss.entropy +
               config.value_coef * loss.value;
  loss.kl = GaussianKl(old_means, batch.old_log_std, means, log_std).mean();
  loss.clip_fraction = clipped * inv_n;

  if (grad == nullptr) return loss;
  grad->setZero(params.size());
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();
  const Eigen::MatrixXd diff = actions - means;
  // dlogpi/dmu = (a - mu) / sigma^2; dlogpi/dlogsigma = z^2 - 1.
  const Eigen::MatrixXd d_means =
      (diff.array().colwise() * inv_var).rowwise() * d_log_prob.transpose().array();
  const Eigen::VectorXd d_log_std =
      ((diff.array().square().colwise() * inv_var - 1.0).rowwise() *
       d_log_prob.transpose().array())
          .rowwise()
          .sum()
          .matrix() -
      Eigen::VectorXd::Constant(action_size, config.entropy_coef);
  actor.Backward(params.data(), actor_cache, d_means, grad->data());
  grad->segment(net.log_std_offset(), action_size) += d_log_std;
  const Eigen::MatrixXd d_values =
      (2.0 * config.value_coef * inv_n) * value_error.transpose();
  critic.Backward(params.data() + net.critic_offset(), critic_cache, d_values,
                  grad->data() + net.critic_offset());
  return loss;
}

Adam::Adam(int size, double beta1, double beta2, double epsilon)
    : m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {}

void Adam::Step(Eigen::VectorXd* params, const Eigen::VectorXd& grad,
                double lr) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params->array() -=
      lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + epsilon_);
}

void Adam::SetState(long long steps, const Eigen::VectorXd& m,
                    const Eigen::VectorXd& v) {
  if (m.size() != m_.size() || v.size() != v_.size()) {
    throw Error(ErrorCode::kCheckpointMismatch, "optimizer size mismatch");
  }
  t_ = steps;
  m_ = m;
  v_ = v;
}

UpdateStats PpoUpdate(ActorCritic* net, Adam* adam, const RolloutBatch& batch,
                      const PpoConfig& config, double* learning_rate,
                      std::mt19937_64& rng) {
  const int samples = batch.size();
  const int minibatches = std::min(config.minibatches, samples);
  const Eigen::VectorXd params_on_entry = net->parameters();
  const Adam adam_on_entry = *adam;
  const double lr_on_entry = *learning_rate;

  std::vector<int> order(samples);
  UpdateStats stats;
  int updates = 0;
  Eigen::VectorXd grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (int k = samples - 1; k > 0; --k) {
      std::swap(order[k], order[UniformIndex(rng, k + 1)]);
    }
    for (int mb = 0; mb < minibatches; ++mb) {
      const int begin = static_cast<int>(static_cast<long long>(samples) * mb / minibatches);
      const int end = static_cast<int>(static_cast<long long>(samples) * (mb + 1) / minibatches);
      const std::vector<int> indices(order.begin() + begin, order.begin() + end);
      const PpoLoss loss =
          EvaluatePpoLoss(*net, net->parameters(), batch, indices, config, &grad);
      if (!std::isfinite(loss.total) || !grad.allFinite()) {
        net->parameters() = params_on_entry;
        *adam = adam_on_entry;
        *learning_rate = lr_on_entry;
        throw Error(ErrorCode::kNonFiniteLoss,
                    "epoch " + std::to_string(epoch) + " minibatch " +
                        std::to_string(mb));
      }
      if (config.adaptive_lr) {
        if (loss.kl > 2.0 * config.desired_kl) {
          *learning_rate = std::max(config.min_learning_rate, *learning_rate / 1.5);
        } else if (loss.kl < 0.5 * config.desired_kl && loss.kl > 0.0) {
          *learning_rate = std::min(config.max_learning_rate, *learning_rate * 1.5);
        }
      }
      ClipGradNorm(&grad, config.max_grad_norm);
      adam->Step(&net->parameters(), grad, *learning_rate);
      stats.surrogate += loss.surrogate;
      stats.value += loss.value;
      stats.entropy += loss.entropy;
      stats.kl += loss.kl;
      stats.clip_fraction += loss.clip_fraction;
      ++updates;
    }
  }
  const double inv = 1.0 / updates;
  stats.surrogate *= inv;
  stats.value *= inv;
  stats.entropy *= inv;
  stats.kl *= inv;
  stats.clip_fraction *= inv;
  stats.learning_rate = *learning_rate;
  return stats;
}

}  // namespace tiltrl
