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

#include "tiltrl/trainer.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <random>

#include "tiltrl/error.h"
#include "tiltrl/gae.h"
#include "tiltrl/gaussian.h"
#include "tiltrl/random.h"
#include "tiltrl/vec_env.h"

namespace tiltrl {
namespace {

std::vector<int> ReadSizes(const KeyValueConfig& config, const std::string& key,
                           const std::vector<int>& fallback) {
  if (!config.Has(key)) return fallback;
  std::vector<int> sizes;
  for (double v : config.GetDoubles(key)) sizes.push_back(static_cast<int>(v));
  return sizes;
}

std::vector<double> ToDoubles(const std::vector<int>& v) {
  return std::vector<double>(v.begin(), v.end());
}

void Fmt(std::string* line, double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), ",%.17g", v);
  line->append(buffer);
}

}  // namespace

TrainConfig TrainConfig::Smoke() {
  TrainConfig c;
  c.env.task = TaskMode::kHover;
  c.env.spawn_position = Vec3(0.0, 0.0, 1.5);
  c.network.actor_hidden = {128, 128};
  c.network.critic_hidden = {128, 128};
  c.ppo.minibatches = 16;
  c.num_envs = 256;
  c.steps_per_iteration = 48;
  c.iterations = 300;
  c.seed = 1;
  return c;
}

TrainConfig TrainConfig::FromConfig(const KeyValueConfig& config) {
  TrainConfig c;
  c.env = EnvConfig::FromConfig(config);
  c.ppo = PpoConfig::FromConfig(config);
  c.network.actor_hidden = ReadSizes(config, "actor_hidden", c.network.actor_hidden);
  c.network.critic_hidden =
      ReadSizes(config, "critic_hidden", c.network.critic_hidden);
  config.Read("init_log_std", &c.network.init_log_std);
  config.Read("normalize_inputs", &c.network.normalize_inputs);
  config.Read("num_envs", &c.num_envs);
  config.Read("steps_per_iteration", &c.steps_per_iteration);
  config.Read("iterations", &c.iterations);
  if (config.Has("seed")) c.seed = static_cast<uint64_t>(config.GetInt("seed"));
  config.Read("num_threads", &c.num_threads);
  config.Read("checkpoint_interval", &c.checkpoint_interval);
  config.Read("episode_window", &c.episode_window);
  if (c.num_envs < 1 || c.steps_per_iteration < 1 || c.iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid training sizes");
  }
  return c;
}

void TrainConfig::WriteTo(KeyValueConfig* config) const {
  env.WriteTo(config);
  ppo.WriteTo(config);
  config->Set("actor_hidden", ToDoubles(network.actor_hidden));
  config->Set("critic_hidden", ToDoubles(network.critic_hidden));
  config->Set("init_log_std", network.init_log_std);
  config->Set("normalize_inputs", network.normalize_inputs);
  config->Set("num_envs", num_envs);
  config->Set("steps_per_iteration", steps_per_iteration);
  config->Set("iterations", iterations);
  config->Set("seed", static_cast<int>(seed));
  config->Set("num_threads", num_threads);
  config->Set("checkpoint_interval", checkpoint_interval);
  config->Set("episode_window", episode_window);
}

std::string LearningCurveHeader() {
  return "iteration,mean_step_reward,mean_episode_return,mean_episode_length,"
         "kl,clip_fraction,learning_rate,surrogate_loss,value_loss,entropy";
}

std::string FormatLearningCurveRow(const IterationStats& s) {
  std::string line = std::to_string(s.iteration);
  Fmt(&line, s.mean_step_reward);
  Fmt(&line, s.mean_episode_return);
  Fmt(&line, s.mean_episode_length);
  Fmt(&line, s.kl);
  Fmt(&line, s.clip_fraction);
  Fmt(&line, s.learning_rate);
  Fmt(&line, s.surrogate_loss);
  Fmt(&line, s.value_loss);
  Fmt(&line, s.entropy);
  return line;
}

TrainResult Train(const TrainConfig& config, const TrainOutputs& outputs) {
  const int n = config.num_envs;
  const int steps = config.steps_per_iteration;
  const int samples = n * steps;

  TrainResult result;
  Checkpoint& ckpt = result.checkpoint;
  ckpt.net = ActorCritic(config.network, config.seed);
  ckpt.optimizer = Adam(ckpt.net.num_params(), config.ppo.adam_beta1,
                        config.ppo.adam_beta2, config.ppo.adam_epsilon);
  ckpt.learning_rate = config.ppo.learning_rate;
  ckpt.seed = config.seed;
  KeyValueConfig kv;
  config.WriteTo(&kv);
  ckpt.config_text = kv.ToString();
  ActorCritic& net = ckpt.net;

  VecEnv envs(config.env, n, config.seed, config.num_threads);
  std::mt19937_64 action_rng(MixSeed(config.seed, 0x616374ULL));
  std::mt19937_64 update_rng(MixSeed(config.seed, 0x757064ULL));

  std::ofstream curve_file;
  if (!outputs.out_dir.empty()) {
    std::filesystem::create_directories(outputs.out_dir);
    curve_file.open(outputs.out_dir / "learning_curve.csv", std::ios::trunc);
    if (!curve_file) {
      throw Error(ErrorCode::kIo,
                  "cannot open " + (outputs.out_dir / "learning_curve.csv").string());
    }
    curve_file << LearningCurveHeader() << '\n';
    SaveCheckpoint(ckpt, outputs.out_dir / "checkpoint.json");
  }

  RolloutBatch batch;
  batch.observations.values.resize(Observation::kSize, samples);
  batch.critic.values.resize(CriticState::kSize, samples);
  batch.actions.resize(kActionSize, samples);
  batch.old_means.resize(kActionSize, samples);
  batch.old_log_probs.resize(samples);
  Eigen::MatrixXd rewards(steps, n);
  Eigen::MatrixXd values(steps, n);
  Eigen::MatrixXd dones(steps, n);
  std::deque<double> episode_returns;
  std::deque<int> episode_lengths;
  VecStepResult step;

  for (int iter = 0; iter < config.iterations; ++iter) {
    const auto start = std::chrono::steady_clock::now();
    double reward_sum = 0.0;
    for (int t = 0; t < steps; ++t) {
      if (config.network.normalize_inputs) {
        net.observation_normalizer().Update(envs.observations());
        net.critic_normalizer().Update(envs.critic_states());
      }
      const ObservationBatch obs{envs.observations()};
      const CriticBatch critic{envs.critic_states()};
      const PolicyOutput policy = net.Policy(obs);
      const Eigen::MatrixXd actions =
          GaussianSample(policy.means, policy.log_std, action_rng);
      values.row(t) = net.Value(critic).transpose();
      const Eigen::Index col = static_cast<Eigen::Index>(t) * n;
      batch.observations.values.middleCols(col, n) = obs.values;
      batch.critic.values.middleCols(col, n) = critic.values;
      batch.actions.middleCols(col, n) = actions;
      batch.old_means.middleCols(col, n) = policy.means;
      batch.old_log_probs.segment(col, n) =
          GaussianLogProb(policy.means, policy.log_std, actions);
      batch.old_log_std = policy.log_std;

      envs.Step(actions, &step);
      reward_sum += step.rewards.sum();
      Eigen::VectorXd r = step.rewards;
      bool any_time_out = false;
      for (int i = 0; i < n; ++i) any_time_out |= step.time_outs[i] != 0;
      if (any_time_out) {
        // Time-outs are not failures: fold the value of the final state back
        // into the reward so the cut does not look like a terminal state.
        const Eigen::VectorXd terminal = net.Value({step.terminal_critic});
        for (int i = 0; i < n; ++i) {
          if (step.time_outs[i]) r[i] += config.ppo.gamma * terminal[i];
        }
      }
      rewards.row(t) = r.transpose();
      for (int i = 0; i < n; ++i) dones(t, i) = step.dones[i] ? 1.0 : 0.0;
      for (size_t k = 0; k < step.finished_returns.size(); ++k) {
        episode_returns.push_back(step.finished_returns[k]);
        episode_lengths.push_back(step.finished_lengths[k]);
        if (static_cast<int>(episode_returns.size()) > config.episode_window) {
          episode_returns.pop_front();
          episode_lengths.pop_front();
        }
      }
    }
    const Eigen::VectorXd bootstrap = net.Value({envs.critic_states()});
    Eigen::MatrixXd advantages;
    Eigen::MatrixXd returns;
    ComputeGae(rewards, values, dones, bootstrap, config.ppo.gamma,
               config.ppo.lambda, &advantages, &returns);
    // Row t of the T x N matrices maps to columns t*N .. t*N+N-1.
    const Eigen::MatrixXd adv_t = advantages.transpose();
    const Eigen::MatrixXd ret_t = returns.transpose();
    batch.advantages = Eigen::Map<const Eigen::VectorXd>(adv_t.data(), samples);
    batch.returns = Eigen::Map<const Eigen::VectorXd>(ret_t.data(), samples);
    NormalizeAdvantages(batch.advantages);

    const UpdateStats update = PpoUpdate(&net, &ckpt.optimizer, batch,
                                         config.ppo, &ckpt.learning_rate,
                                         update_rng);
    ckpt.iteration = iter + 1;

    IterationStats stats;
    stats.iteration = iter;
    stats.mean_step_reward = reward_sum / samples;
    if (episode_returns.empty()) {
      stats.mean_episode_return = std::numeric_limits<double>::quiet_NaN();
      stats.mean_episode_length = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ret = 0.0;
      double len = 0.0;
      for (size_t k = 0; k < episode_returns.size(); ++k) {
        ret += episode_returns[k];
        len += episode_lengths[k];
      }
      stats.mean_episode_return = ret / episode_returns.size();
      stats.mean_episode_length = len / episode_lengths.size();
    }
    stats.kl = update.kl;
    stats.clip_fraction = update.clip_fraction;
    stats.learning_rate = update.learning_rate;
    stats.surrogate_loss = update.surrogate;
    stats.value_loss = update.value;
    stats.entropy = update.entropy;
    stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    result.curve.push_back(stats);

    if (curve_file.is_open()) {
      curve_file << FormatLearningCurveRow(stats) << '\n';
      curve_file.flush();
      const bool periodic = config.checkpoint_interval > 0 &&
                            (iter + 1) % config.checkpoint_interval == 0;
      if (periodic || iter + 1 == config.iterations) {
        SaveCheckpoint(ckpt, outputs.out_dir / "checkpoint.json");
      }
      if (periodic) {
        SaveCheckpoint(ckpt, outputs.out_dir / ("checkpoint_" +
                                                std::to_string(iter + 1) + ".json"));
      }
    }
    if (outputs.on_iteration) outputs.on_iteration(stats);
  }
  return result;
}

}  // namespace tiltrl
