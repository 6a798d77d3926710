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

#include "tiltrl/checkpoint.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "tiltrl/error.h"

namespace tiltrl {
namespace {

using nlohmann::ordered_json;

constexpr char kFormat[] = "tiltrl-checkpoint";

std::vector<double> ToVector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd ToEigen(const ordered_json& j) {
  const std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

ordered_json NormalizerJson(const RunningNormalizer& n) {
  ordered_json j;
  j["count"] = n.count();
  j["mean"] = ToVector(n.mean());
  j["variance"] = ToVector(n.variance());
  return j;
}

void ReadNormalizer(const ordered_json& j, RunningNormalizer* n) {
  n->SetState(j.at("count").get<double>(), ToEigen(j.at("mean")),
              ToEigen(j.at("variance")));
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& c) {
  const NetworkConfig& nc = c.net.config();
  ordered_json j;
  j["format"] = kFormat;
  j["version"] = kCheckpointVersion;
  j["seed"] = c.seed;
  j["iteration"] = c.iteration;
  j["learning_rate"] = c.learning_rate;
  ordered_json net;
  net["actor_sizes"] = c.net.actor().sizes();
  net["critic_sizes"] = c.net.critic().sizes();
  net["init_log_std"] = nc.init_log_std;
  net["hidden_gain"] = nc.hidden_gain;
  net["actor_output_gain"] = nc.actor_output_gain;
  net["critic_output_gain"] = nc.critic_output_gain;
  net["normalize_inputs"] = nc.normalize_inputs;
  net["num_params"] = c.net.num_params();
  net["parameters"] = ToVector(c.net.parameters());
  net["observation_normalizer"] = NormalizerJson(c.net.observation_normalizer());
  net["critic_normalizer"] = NormalizerJson(c.net.critic_normalizer());
  j["network"] = std::move(net);
  ordered_json opt;
  opt["steps"] = c.optimizer.steps();
  opt["first_moment"] = ToVector(c.optimizer.first_moment());
  opt["second_moment"] = ToVector(c.optimizer.second_moment());
  j["optimizer"] = std::move(opt);
  j["config"] = c.config_text;
  return j.dump(1) + "\n";
}

Checkpoint ParseCheckpoint(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("checkpoint: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw Error(ErrorCode::kCheckpointMismatch, "not a tiltrl checkpoint");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw Error(ErrorCode::kCheckpointMismatch,
                  "unsupported checkpoint version " +
                      std::to_string(j.at("version").get<int>()));
    }
    const ordered_json& net = j.at("network");
    const std::vector<int> actor_sizes = net.at("actor_sizes").get<std::vector<int>>();
    const std::vector<int> critic_sizes =
        net.at("critic_sizes").get<std::vector<int>>();
    NetworkConfig nc;
    if (actor_sizes.size() < 2 || critic_sizes.size() < 2) {
      throw Error(ErrorCode::kCheckpointMismatch, "bad layer sizes");
    }
    nc.actor_hidden.assign(actor_sizes.begin() + 1, actor_sizes.end() - 1);
    nc.critic_hidden.assign(critic_sizes.begin() + 1, critic_sizes.end() - 1);
    nc.init_log_std = net.at("init_log_std").get<double>();
    nc.hidden_gain = net.at("hidden_gain").get<double>();
    nc.actor_output_gain = net.at("actor_output_gain").get<double>();
    nc.critic_output_gain = net.at("critic_output_gain").get<double>();
    nc.normalize_inputs = net.at("normalize_inputs").get<bool>();

    Checkpoint c;
    c.net = ActorCritic(nc, 0);
    if (c.net.actor().sizes() != actor_sizes ||
        c.net.critic().sizes() != critic_sizes) {
      throw Error(ErrorCode::kCheckpointMismatch,
                  "checkpoint input/output sizes do not match this build");
    }
    const Eigen::VectorXd params = ToEigen(net.at("parameters"));
    if (params.size() != c.net.num_params() ||
        net.at("num_params").get<int>() != c.net.num_params()) {
      throw Error(ErrorCode::kCheckpointMismatch, "parameter count mismatch");
    }
    c.net.parameters() = params;
    ReadNormalizer(net.at("observation_normalizer"), &c.net.observation_normalizer());
    ReadNormalizer(net.at("critic_normalizer"), &c.net.critic_normalizer());
    const ordered_json& opt = j.at("optimizer");
    c.optimizer = Adam(c.net.num_params(), 0.9, 0.999, 1e-8);
    c.optimizer.SetState(opt.at("steps").get<long long>(),
                         ToEigen(opt.at("first_moment")),
                         ToEigen(opt.at("second_moment")));
    c.learning_rate = j.at("learning_rate").get<double>();
    c.iteration = j.at("iteration").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.config_text = j.at("config").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCheckpointMismatch,
                std::string("checkpoint field: ") + e.what());
  }
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + " to " +
                                    path.string() + ": " + ec.message());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeCheckpoint(checkpoint));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFile(path));
}

}  // namespace tiltrl
