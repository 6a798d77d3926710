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

// tiltrl command-line entry point: training, evaluation protocols, actuator
// identification and open-loop replay.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tiltrl/checkpoint.h"
#include "tiltrl/error.h"
#include "tiltrl/eval.h"
#include "tiltrl/kv_config.h"
#include "tiltrl/sysid.h"
#include "tiltrl/trainer.h"
#include "tiltrl/trajectory_log.h"

namespace tiltrl {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string checkpoint;
};

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &tm);
  return buffer;
}

fs::path OutputDir(const GlobalOptions& g) {
  const fs::path dir = g.out_dir.empty() ? fs::path("runs") / Timestamp()
                                         : fs::path(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  }
  return dir;
}

KeyValueConfig UserConfig(const GlobalOptions& g) {
  return g.config.empty() ? KeyValueConfig() : KeyValueConfig::Load(g.config);
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  bool smoke = false;
  std::optional<int> iterations;
  std::optional<int> num_envs;
  std::optional<int> threads;
};

int RunTrain(const GlobalOptions& g, const TrainOptions& o) {
  KeyValueConfig kv;
  (o.smoke ? TrainConfig::Smoke() : TrainConfig()).WriteTo(&kv);
  kv.Merge(UserConfig(g));
  TrainConfig config = TrainConfig::FromConfig(kv);
  if (g.seed) config.seed = *g.seed;
  if (o.iterations) config.iterations = *o.iterations;
  if (o.num_envs) config.num_envs = *o.num_envs;
  if (o.threads) config.num_threads = *o.threads;
  if (!g.checkpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "train starts from a fresh initialization; --checkpoint is only "
                "used by eval");
  }
  const fs::path dir = OutputDir(g);
  KeyValueConfig effective;
  config.WriteTo(&effective);
  effective.Save(dir / "config.cfg");

  TrainOutputs outputs;
  outputs.out_dir = dir;
  outputs.on_iteration = [](const IterationStats& s) {
    std::printf("iter %4d  step_reward %8.4f  episode_return %9.2f  "
                "episode_length %6.1f  kl %.4f  lr %.2e  %.2fs\n",
                s.iteration, s.mean_step_reward, s.mean_episode_return,
                s.mean_episode_length, s.kl, s.learning_rate, s.seconds);
    std::fflush(stdout);
  };
  Train(config, outputs);
  std::printf("wrote %s\n", (dir / "checkpoint.json").string().c_str());
  return 0;
}

// ----------------------------------------------------------------- eval

struct EvalOptions {
  std::string controller = "policy";
  int repetitions = 0;  // 0: protocol default
  int threads = 1;
  // waypoints
  int random_poses = 0;
  double horizon = 8.0;
  // disturbance
  std::string kind = "force";
  std::vector<double> magnitudes;
  // payload
  std::vector<double> masses;
  // trajectory
  double period = 20.0;
  double duration = 20.0;
  // hold
  int episodes = 100;
  double check_time = 4.0;
  double threshold = 0.3;
};

struct EvalContext {
  EvalSettings settings;
  std::optional<Checkpoint> checkpoint;
  std::unique_ptr<Controller> controller;
  fs::path dir;
};

EvalContext MakeEvalContext(const GlobalOptions& g, const EvalOptions& o) {
  EvalContext ctx;
  KeyValueConfig kv;
  if (!g.checkpoint.empty()) {
    ctx.checkpoint = LoadCheckpoint(g.checkpoint);
    kv = KeyValueConfig::Parse(ctx.checkpoint->config_text);
  }
  kv.Merge(UserConfig(g));
  ctx.settings.env = EnvConfig::FromConfig(kv);
  ctx.settings.seed = g.seed.value_or(1);
  ctx.settings.num_threads = o.threads;
  if (o.controller == "policy") {
    if (!ctx.checkpoint) {
      throw Error(ErrorCode::kInvalidArgument,
                  "the policy controller needs --checkpoint");
    }
    ctx.controller = std::make_unique<PolicyController>(&ctx.checkpoint->net);
  } else {
    ctx.controller = std::make_unique<HoverController>();
  }
  ctx.dir = OutputDir(g);

  KeyValueConfig info;
  info.Set("checkpoint", g.checkpoint.empty() ? std::string("none") : g.checkpoint);
  info.Set("controller", o.controller);
  info.Set("seed", static_cast<int>(ctx.settings.seed));
  if (ctx.checkpoint) {
    info.Set("checkpoint_iteration", ctx.checkpoint->iteration);
    info.Set("checkpoint_seed", static_cast<int>(ctx.checkpoint->seed));
  }
  info.Save(ctx.dir / "checkpoint_info.cfg");
  KeyValueConfig env_kv;
  ctx.settings.env.WriteTo(&env_kv);
  env_kv.Save(ctx.dir / "config.cfg");
  return ctx;
}

void PrintAggregate(const MetricReport& report, const EmittedFiles& files) {
  std::printf("%s: %zu segments\n", report.kind.c_str(), report.segments.size());
  for (const auto& a : Aggregate(report)) {
    std::printf("  %-28s mean %-12.6g min %-12.6g max %-12.6g (n=%d)\n",
                a.name.c_str(), a.mean, a.min, a.max, a.count);
  }
  std::printf("wrote %s\n      %s\n", files.metrics.string().c_str(),
              files.trajectory.string().c_str());
}

int RunEval(const std::string& protocol, const GlobalOptions& g,
            const EvalOptions& o) {
  EvalContext ctx = MakeEvalContext(g, o);
  EvalSettings& s = ctx.settings;
  MetricReport report;
  if (protocol == "waypoints") {
    s.repetitions = o.repetitions > 0 ? o.repetitions : 1;
    WaypointSpec spec;
    spec.horizon = o.horizon;
    if (o.horizon < spec.windows.u_end) {
      // Short horizons keep the default windows' proportions.
      const double scale = o.horizon / 8.0;
      spec.windows.u_start *= scale;
      spec.windows.u_end *= scale;
      spec.windows.l_start *= scale;
      spec.windows.l_end *= scale;
    }
    spec.poses = o.random_poses > 0
                     ? RandomWaypoints(s.env, o.random_poses, s.seed)
                     : DefaultWaypoints();
    report = RunWaypoints(*ctx.controller, s, spec);
  } else if (protocol == "disturbance") {
    s.repetitions = o.repetitions > 0 ? o.repetitions : 1;
    DisturbanceSpec spec;
    if (o.kind == "force") {
      spec = DisturbanceSpec::DefaultForce();
    } else if (o.kind == "torque") {
      spec = DisturbanceSpec::DefaultTorque();
    } else {
      throw Error(ErrorCode::kInvalidArgument, "--kind must be force or torque");
    }
    if (!o.magnitudes.empty()) spec.magnitudes = o.magnitudes;
    report = RunDisturbance(*ctx.controller, s, spec);
  } else if (protocol == "payload") {
    s.repetitions = o.repetitions > 0 ? o.repetitions : 1;
    PayloadSpec spec;
    if (!o.masses.empty()) spec.masses = o.masses;
    spec.horizon = o.horizon;
    report = RunPayload(*ctx.controller, s, spec);
  } else if (protocol == "trajectory") {
    s.repetitions = o.repetitions > 0 ? o.repetitions : 5;
    LemniscateSpec spec;
    spec.period = o.period;
    spec.duration = o.duration;
    report = RunTrajectory(*ctx.controller, s, spec);
  } else {  // hold
    const HoverHoldResult r =
        RunHoverHold(*ctx.controller, s.env, o.episodes, s.seed, o.check_time,
                     o.threshold, o.threads);
    report.kind = "hover-hold";
    report.seed = s.seed;
    report.control_dt = s.env.control_dt;
    for (size_t e = 0; e < r.position_errors.size(); ++e) {
      report.segments.push_back(
          {"episode" + std::to_string(e),
           {{"position_error", r.position_errors[e]},
            {"success", r.position_errors[e] < o.threshold ? 1.0 : 0.0}}});
    }
    std::printf("hold: %d/%zu episodes within %.3g m at t = %.3g s\n",
                r.successes, r.position_errors.size(), o.threshold, o.check_time);
  }
  PrintAggregate(report, EmitReport(report, ctx.dir));
  return 0;
}

// ---------------------------------------------------------------- sysid

struct SysidOptions {
  std::string in;
  std::string out;
  int degree = 2;
  std::optional<double> inertia;
};

int RunSysidRotor(const GlobalOptions& g, const SysidOptions& o) {
  const std::vector<ThrustSample> samples = ReadThrustCsv(o.in);
  const RotorFit fit = FitRotorPolynomial(samples, o.degree, 1);
  std::printf("rotor fit: %zu samples, rms %.6g N, monotone %s\n",
              samples.size(), fit.rms_residual, fit.monotone() ? "yes" : "NO");
  for (size_t k = 0; k < fit.coefficients.size(); ++k) {
    std::printf("  c%zu = %.10g\n", k, fit.coefficients[k]);
  }
  RotorModel model = RotorModel::FromConfig(UserConfig(g));
  double ratio = model.torque_thrust_ratio;
  try {
    ratio = FitTorqueRatio(samples);
    std::printf("torque/thrust ratio %.6g m\n", ratio);
  } catch (const Error& e) {
    std::printf("torque/thrust ratio kept at %.6g m (%s)\n", ratio, e.what());
  }
  model = fit.ToRotorModel(model);
  model.torque_thrust_ratio = ratio;
  KeyValueConfig kv;
  model.WriteTo(&kv);
  kv.Set("rotor_fit_rms", fit.rms_residual);
  kv.Set("rotor_fit_monotone", fit.monotone());
  kv.Save(o.out);
  std::printf("wrote %s\n", o.out.c_str());
  return 0;
}

int RunSysidJoint(const GlobalOptions& g, const SysidOptions& o) {
  const JointResponseLog log = ReadJointCsv(o.in);
  JointServo base = JointServo::FromConfig(UserConfig(g));
  if (o.inertia) base.inertia = *o.inertia;
  const JointFit fit = FitJointSecondOrder(log, base);
  std::printf("joint fit: omega_n %.6g rad/s  zeta %.6g  kp %.6g  kd %.6g  "
              "rms %.3g rad  (%d iterations)\n",
              fit.omega_n, fit.zeta, fit.kp, fit.kd, fit.rms_residual,
              fit.iterations);
  JointServo servo = base;
  servo.kp = fit.kp;
  servo.kd = fit.kd;
  KeyValueConfig kv;
  servo.WriteTo(&kv);
  kv.Set("joint_fit_rms", fit.rms_residual);
  kv.Save(o.out);
  std::printf("wrote %s\n", o.out.c_str());
  return 0;
}

// ------------------------------------------------------------------ sim

struct ReplayOptions {
  std::string in;
  int steps = 400;
};

// Replays the actions of the first segment of a trajectory CSV (or zero
// actions) open loop from the environment's reset state.
int RunReplay(const GlobalOptions& g, const ReplayOptions& o) {
  KeyValueConfig kv;
  if (!g.checkpoint.empty()) {
    kv = KeyValueConfig::Parse(LoadCheckpoint(g.checkpoint).config_text);
  }
  kv.Merge(UserConfig(g));
  EnvConfig env_config = EnvConfig::FromConfig(kv);
  env_config.max_episode_steps = std::max(env_config.max_episode_steps, o.steps);

  std::vector<Action> actions;
  if (!o.in.empty()) {
    std::istringstream in(ReadFile(o.in));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
      std::istringstream h(line);
      std::string name;
      while (std::getline(h, name, ',')) header.push_back(name);
    }
    auto column = [&](const std::string& name) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw Error(ErrorCode::kParse, o.in + ": missing column " + name);
      }
      return static_cast<size_t>(it - header.begin());
    };
    const size_t segment = column("segment");
    const size_t a0 = column("a0");
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::istringstream f(line);
      std::string field;
      while (std::getline(f, field, ',')) fields.push_back(field);
      if (fields.size() != header.size()) {
        throw Error(ErrorCode::kParse, o.in + ": ragged row");
      }
      if (std::stod(fields[segment]) != 0.0) break;
      Action a;
      for (int k = 0; k < kActionSize; ++k) a[k] = std::stod(fields[a0 + k]);
      actions.push_back(a);
    }
  } else {
    actions.assign(o.steps, Action{});
  }

  TiltEnv env(env_config, 0, g.seed.value_or(1));
  env.Reset();
  const fs::path dir = OutputDir(g);
  std::ostringstream csv;
  TrajectoryCsvWriter writer(&csv);
  int steps = 0;
  for (const Action& a : actions) {
    const StepResult r = env.Step(a);
    writer.Write(CaptureRow(env, a, r, 0, env.sim_time()));
    ++steps;
    if (r.termination.done) {
      std::printf("terminated at step %d (%s)\n", steps,
                  std::string(TerminationReasonName(r.termination.reason)).c_str());
      break;
    }
  }
  WriteFileAtomic(dir / "traj_replay.csv", csv.str());
  std::printf("replayed %d steps; wrote %s\n", steps,
              (dir / "traj_replay.csv").string().c_str());
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Tiltable-quadrotor simulation, PPO training and evaluation"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "key = value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out-dir", g.out_dir,
                 "output directory (default runs/<timestamp>)");
  app.add_option("--checkpoint", g.checkpoint, "policy checkpoint (JSON)");

  TrainOptions train_options;
  CLI::App* train = app.add_subcommand("train", "train a policy with PPO");
  train->add_flag("--smoke", train_options.smoke,
                  "hover-stabilization smoke configuration");
  train->add_option("--iterations", train_options.iterations);
  train->add_option("--num-envs", train_options.num_envs);
  train->add_option("--threads", train_options.threads);

  EvalOptions eval_options;
  CLI::App* eval = app.add_subcommand("eval", "run an evaluation protocol");
  eval->require_subcommand(1);
  eval->add_option("--controller", eval_options.controller,
                   "policy (needs --checkpoint) or hover")
      ->check(CLI::IsMember({"policy", "hover"}));
  eval->add_option("--repetitions", eval_options.repetitions);
  eval->add_option("--threads", eval_options.threads);
  CLI::App* waypoints = eval->add_subcommand("waypoints", "sequential pose reaching");
  waypoints->add_option("--random", eval_options.random_poses,
                        "number of random poses instead of the default set");
  waypoints->add_option("--horizon", eval_options.horizon, "seconds per pose");
  CLI::App* disturbance =
      eval->add_subcommand("disturbance", "force or impulse-torque sweep");
  disturbance->add_option("--kind", eval_options.kind)
      ->check(CLI::IsMember({"force", "torque"}));
  disturbance->add_option("--magnitudes", eval_options.magnitudes)->delimiter(',');
  CLI::App* payload = eval->add_subcommand("payload", "hover with added mass");
  payload->add_option("--masses", eval_options.masses)->delimiter(',');
  payload->add_option("--horizon", eval_options.horizon);
  CLI::App* trajectory = eval->add_subcommand("trajectory", "lemniscate tracking");
  trajectory->add_option("--period", eval_options.period);
  trajectory->add_option("--duration", eval_options.duration);
  CLI::App* hold = eval->add_subcommand("hold", "hover-hold success rate");
  hold->add_option("--episodes", eval_options.episodes);
  hold->add_option("--time", eval_options.check_time);
  hold->add_option("--threshold", eval_options.threshold);

  SysidOptions sysid_options;
  CLI::App* sysid = app.add_subcommand("sysid", "actuator identification");
  sysid->require_subcommand(1);
  CLI::App* rotor = sysid->add_subcommand(
      "rotor", "fit thrust polynomial from cmd,voltage,thrust,torque CSV");
  CLI::App* joint =
      sysid->add_subcommand("joint", "fit servo gains from t,q_cmd,q_meas CSV");
  for (CLI::App* sub : {rotor, joint}) {
    sub->add_option("--in", sysid_options.in, "input CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", sysid_options.out, "actuator config to write")
        ->required();
  }
  rotor->add_option("--degree", sysid_options.degree, "polynomial degree in cmd");
  joint->add_option("--inertia", sysid_options.inertia,
                    "assumed joint inertia, kg m^2");

  ReplayOptions replay_options;
  CLI::App* sim = app.add_subcommand("sim", "simulator utilities");
  sim->require_subcommand(1);
  CLI::App* replay = sim->add_subcommand("replay", "open-loop action replay");
  replay->add_option("--in", replay_options.in,
                     "trajectory CSV whose a0..a7 columns are replayed");
  replay->add_option("--steps", replay_options.steps,
                     "zero-action steps when --in is absent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return RunTrain(g, train_options);
    for (CLI::App* sub : {waypoints, disturbance, payload, trajectory, hold}) {
      if (sub->parsed()) return RunEval(sub->get_name(), g, eval_options);
    }
    if (rotor->parsed()) return RunSysidRotor(g, sysid_options);
    if (joint->parsed()) return RunSysidJoint(g, sysid_options);
    if (replay->parsed()) return RunReplay(g, replay_options);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace tiltrl

int main(int argc, char** argv) { return tiltrl::Main(argc, argv); }
