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

// PPO training loop over the vectorized environment.

#ifndef TILTRL_TRAINER_H_
#define TILTRL_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "tiltrl/actor_critic.h"
#include "tiltrl/checkpoint.h"
#include "tiltrl/environment.h"
#include "tiltrl/kv_config.h"
#include "tiltrl/ppo.h"

namespace tiltrl {

struct TrainConfig {
  EnvConfig env;
  NetworkConfig network;
  PpoConfig ppo;
  int num_envs = 256;
  int steps_per_iteration = 48;
  int iterations = 300;
  uint64_t seed = 1;
  // 1 is the deterministic single-threaded mode; rollouts are identical for
  // any thread count because every environment owns its RNG.
  int num_threads = 1;
  // Every this many iterations a checkpoint is written (0 disables).
  int checkpoint_interval = 50;
  // Rolling window of finished episodes used for the episode statistics.
  int episode_window = 100;

  // Hover-stabilization run: upright spawn at the target (0, 0, 1.5), full
  // randomization, 256 environments x 48 steps x 300 iterations, a
  // [128, 128] network for both heads and 16 minibatches per epoch.
  static TrainConfig Smoke();

  static TrainConfig FromConfig(const KeyValueConfig& config);
  void WriteTo(KeyValueConfig* config) const;
};

struct IterationStats {
  int iteration = 0;
  double mean_step_reward = 0.0;
  // Over the last `episode_window` finished episodes; NaN before the first.
  double mean_episode_return = 0.0;
  double mean_episode_length = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
  double learning_rate = 0.0;
  double surrogate_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double seconds = 0.0;
};

std::string LearningCurveHeader();
std::string FormatLearningCurveRow(const IterationStats& stats);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<IterationStats> curve;
};

struct TrainOutputs {
  // Directory for checkpoint.json, checkpoint_<iter>.json and
  // learning_curve.csv; empty writes nothing.
  std::filesystem::path out_dir;
  std::function<void(const IterationStats&)> on_iteration;
};

TrainResult Train(const TrainConfig& config, const TrainOutputs& outputs = {});

}  // namespace tiltrl

#endif  // TILTRL_TRAINER_H_
