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

// Versioned JSON checkpoints holding network shapes, parameters, normalizer
// and optimizer state, the run configuration and the seed.

#ifndef TILTRL_CHECKPOINT_H_
#define TILTRL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "tiltrl/actor_critic.h"
#include "tiltrl/ppo.h"

namespace tiltrl {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  ActorCritic net;
  Adam optimizer;
  double learning_rate = 0.0;
  int iteration = 0;
  uint64_t seed = 0;
  // Full run configuration in key-value text form.
  std::string config_text;
};

std::string SerializeCheckpoint(const Checkpoint& checkpoint);
// Throws kParse on malformed text and kCheckpointMismatch on a version or
// shape mismatch.
Checkpoint ParseCheckpoint(const std::string& text);

// Writes `path`.tmp then renames it over `path`.
void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Writes `contents` to `path` atomically (temporary file plus rename).
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace tiltrl

#endif  // TILTRL_CHECKPOINT_H_
