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

#include "tiltrl/eval.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "tiltrl/checkpoint.h"
#include "tiltrl/error.h"
#include "tiltrl/parallel.h"
#include "tiltrl/random.h"

namespace tiltrl {
namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kSchemaVersion = 1;

int StepsFor(double seconds, double dt, const char* what) {
  const double n = seconds / dt;
  const double rounded = std::round(n);
  if (!(seconds >= 0.0) || std::abs(n - rounded) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be a non-negative multiple of the "
                                    "control period");
  }
  return static_cast<int>(rounded);
}

// Evaluation environments never time out.
EnvConfig EvalEnvConfig(const EnvConfig& env) {
  EnvConfig config = env;
  config.max_episode_steps = std::numeric_limits<int>::max() / 2;
  return config;
}

RobotState RestAt(const TargetPose& pose) {
  RobotState state;
  state.position = pose.position;
  state.orientation = pose.orientation;
  return state;
}

struct RunOutcome {
  std::vector<TrajectoryRow> rows;
  Termination termination;
};

// Steps the controller in the loop. `before_capture(k)` runs after step k
// (1-based) and before its row is recorded.
RunOutcome RunSteps(TiltEnv* env, const Controller& controller, int steps,
                    int segment,
                    const std::function<void(int)>& before_capture = nullptr) {
  RunOutcome out;
  out.rows.reserve(steps);
  for (int k = 1; k <= steps; ++k) {
    const Action action = controller.Act(env->observation());
    const StepResult result = env->Step(action);
    if (before_capture) before_capture(k);
    TrajectoryRow row = CaptureRow(*env, action, result, segment, env->sim_time());
    row.step = k;
    out.rows.push_back(row);
    if (result.termination.done) {
      out.termination = result.termination;
      break;
    }
  }
  return out;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double StdDev(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

double Max(const std::vector<double>& v) {
  return v.empty() ? kNaN : *std::max_element(v.begin(), v.end());
}

double Min(const std::vector<double>& v) {
  return v.empty() ? kNaN : *std::min_element(v.begin(), v.end());
}

std::string Label(int repetition, const std::string& what) {
  return "rep" + std::to_string(repetition) + "/" + what;
}

// Runs `fn(rep)` for every repetition, possibly concurrently, and
// concatenates the per-repetition segments and rows in order. Segment
// indices in rows are renumbered to be global.
MetricReport Assemble(
    const std::string& kind, const EvalSettings& settings,
    const std::function<MetricReport(int)>& fn) {
  if (settings.repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  }
  std::vector<MetricReport> parts(settings.repetitions);
  ParallelFor(settings.repetitions, settings.num_threads,
              [&](int r) { parts[r] = fn(r); });
  MetricReport report;
  report.kind = kind;
  report.seed = settings.seed;
  report.control_dt = settings.env.control_dt;
  for (auto& part : parts) {
    const int offset = static_cast<int>(report.segments.size());
    for (auto& row : part.rows) {
      row.segment += offset;
      report.rows.push_back(std::move(row));
    }
    for (auto& segment : part.segments) {
      report.segments.push_back(std::move(segment));
    }
  }
  return report;
}

TiltEnv MakeEnv(const EvalSettings& settings, int repetition) {
  TiltEnv env(EvalEnvConfig(settings.env), repetition, settings.seed);
  env.Reset();
  return env;
}

ordered_json Number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

double FromJsonNumber(const ordered_json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

}  // namespace

Action PolicyController::Act(const Observation& observation) const {
  ObservationBatch batch;
  batch.values = Eigen::Map<const Eigen::VectorXd>(observation.values.data(),
                                                   Observation::kSize);
  const PolicyOutput out = net_->Policy(batch);
  Action action;
  for (int k = 0; k < kActionSize; ++k) action[k] = out.means(k, 0);
  return action;
}

double SegmentReport::Get(const std::string& name) const {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  throw Error(ErrorCode::kInvalidArgument, "no metric '" + name + "' in " + label);
}

std::vector<AggregateMetric> Aggregate(const MetricReport& report) {
  std::vector<AggregateMetric> out;
  if (report.segments.empty()) return out;
  for (const auto& [name, unused] : report.segments.front().values) {
    AggregateMetric a;
    a.name = name;
    std::vector<double> finite;
    for (const auto& segment : report.segments) {
      for (const auto& [key, value] : segment.values) {
        if (key == name && std::isfinite(value)) finite.push_back(value);
      }
    }
    a.count = static_cast<int>(finite.size());
    a.mean = Mean(finite);
    a.min = Min(finite);
    a.max = Max(finite);
    out.push_back(a);
  }
  return out;
}

std::vector<std::pair<std::string, double>> SegmentMetrics(
    const std::vector<TrajectoryRow>& rows, double dt,
    const MetricWindows& windows) {
  const int u0 = static_cast<int>(std::round(windows.u_start / dt));
  const int u1 = static_cast<int>(std::round(windows.u_end / dt));
  const int l0 = static_cast<int>(std::round(windows.l_start / dt));
  const int l1 = static_cast<int>(std::round(windows.l_end / dt));
  std::vector<double> up, uo, lp, lo, speed, rate, joint, thrust;
  for (const auto& row : rows) {
    const double p = row.position_error;
    const double o = row.orientation_error * kRadToDeg;
    if (row.step >= u0 && row.step < u1) {
      up.push_back(p);
      uo.push_back(o);
    }
    if (row.step >= l0 && row.step < l1) {
      lp.push_back(p);
      lo.push_back(o);
    }
    speed.push_back(row.state.linear_velocity.norm());
    rate.push_back(row.state.angular_velocity.norm());
    double j = 0.0;
    for (int i = 0; i < kNumRotors; ++i) {
      j += std::abs(row.joint_targets[i] - row.state.joint_positions[i]);
      thrust.push_back(row.thrusts[i]);
    }
    joint.push_back(j / kNumRotors * kRadToDeg);
  }
  return {
      {"u_position_error", Mean(up)},
      {"u_orientation_error_deg", Mean(uo)},
      {"l_position_error", Mean(lp)},
      {"l_orientation_error_deg", Mean(lo)},
      {"linear_speed_mean", Mean(speed)},
      {"linear_speed_std", StdDev(speed)},
      {"angular_speed_mean", Mean(rate)},
      {"angular_speed_std", StdDev(rate)},
      {"joint_error_mean_deg", Mean(joint)},
      {"thrust_mean", Mean(thrust)},
      {"thrust_std", StdDev(thrust)},
      {"thrust_min", Min(thrust)},
      {"thrust_max", Max(thrust)},
  };
}

std::vector<TargetPose> DefaultWaypoints() {
  auto pose = [](double x, double y, double z, double roll, double pitch,
                 double yaw) {
    return TargetPose{Vec3(x, y, z),
                      EulerToQuat({roll * kDegToRad, pitch * kDegToRad,
                                   yaw * kDegToRad})};
  };
  return {pose(0.0, 0.0, 0.8, 0.0, 0.0, 0.0), pose(1.0, 0.0, 1.0, 45.0, 0.0, 0.0),
          pose(0.0, 1.0, 1.0, 0.0, -25.0, 0.0),
          pose(-1.0, 0.0, 1.0, -25.0, 0.0, 0.0),
          pose(0.0, 0.0, 0.8, 0.0, 0.0, 90.0)};
}

TargetPose SampleTargetPose(const EnvConfig& env, std::mt19937_64& rng) {
  TargetPose pose;
  for (int k = 0; k < 3; ++k) {
    pose.position[k] = UniformRange(rng, env.target_min[k], env.target_max[k]);
  }
  pose.orientation = SampleUniformAxisAngle(rng, env.target_orientation_range);
  return pose;
}

std::vector<TargetPose> RandomWaypoints(const EnvConfig& env, int count,
                                        uint64_t seed) {
  std::mt19937_64 rng(MixSeed(seed, 0x77617970));
  std::vector<TargetPose> poses;
  for (int i = 0; i < count; ++i) poses.push_back(SampleTargetPose(env, rng));
  return poses;
}

MetricReport RunWaypoints(const Controller& controller,
                          const EvalSettings& settings,
                          const WaypointSpec& spec) {
  const double dt = settings.env.control_dt;
  const int steps = StepsFor(spec.horizon, dt, "horizon");
  if (!(spec.windows.l_start >= 0.0 && spec.windows.l_start < spec.windows.l_end &&
        spec.windows.l_end <= spec.windows.u_start &&
        spec.windows.u_start < spec.windows.u_end &&
        spec.windows.u_end <= spec.horizon)) {
    throw Error(ErrorCode::kInvalidArgument,
                "metric windows must be ordered, disjoint and inside the horizon");
  }
  return Assemble("waypoints", settings, [&](int rep) {
    MetricReport part;
    TiltEnv env = MakeEnv(settings, rep);
    const TargetPose start =
        spec.start_at_first_target && !spec.poses.empty() ? spec.poses.front()
                                                          : spec.start;
    env.SetState(RestAt(start));
    for (size_t i = 0; i < spec.poses.size(); ++i) {
      env.SetTarget(spec.poses[i]);
      RunOutcome run = RunSteps(&env, controller, steps, static_cast<int>(i));
      SegmentReport segment;
      segment.label = Label(rep, "pose" + std::to_string(i));
      segment.values = SegmentMetrics(run.rows, dt, spec.windows);
      segment.values.emplace_back("steps", static_cast<double>(run.rows.size()));
      segment.values.emplace_back("terminated", run.termination.done ? 1.0 : 0.0);
      part.segments.push_back(segment);
      part.rows.insert(part.rows.end(), run.rows.begin(), run.rows.end());
      if (run.termination.done) break;  // partial result
    }
    return part;
  });
}

DisturbanceSpec DisturbanceSpec::DefaultForce() {
  DisturbanceSpec spec;
  spec.kind = DisturbanceKind::kForce;
  for (int k = 0; k <= 10; ++k) spec.magnitudes.push_back(10.0 * k);
  spec.axis = Vec3(0.0, 0.0, -1.0);
  spec.slot = 4.0;
  spec.active = 2.0;
  return spec;
}

DisturbanceSpec DisturbanceSpec::DefaultTorque() {
  DisturbanceSpec spec;
  spec.kind = DisturbanceKind::kTorque;
  for (int k = 0; k <= 6; ++k) spec.magnitudes.push_back(5.0 * k);
  spec.axis = Vec3(1.0, 0.0, 0.0);
  spec.slot = 2.0;
  spec.active = 0.05;
  return spec;
}

MetricReport RunDisturbance(const Controller& controller,
                            const EvalSettings& settings,
                            const DisturbanceSpec& spec) {
  const double dt = settings.env.control_dt;
  const int warmup = StepsFor(spec.warmup, dt, "warmup");
  const int slot = StepsFor(spec.slot, dt, "slot");
  const int active = StepsFor(spec.active, dt, "active window");
  const int hold = StepsFor(spec.recovery_hold, dt, "recovery hold");
  if (slot < 1 || active > slot) {
    throw Error(ErrorCode::kInvalidArgument, "active window must fit in a slot");
  }
  if (!(spec.axis.norm() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "disturbance axis is zero");
  }
  const Vec3 axis = spec.axis.normalized();
  const std::string kind = spec.kind == DisturbanceKind::kForce
                               ? "disturbance-force"
                               : "disturbance-torque";

  return Assemble(kind, settings, [&](int rep) {
    MetricReport part;
    TiltEnv env = MakeEnv(settings, rep);
    env.SetState(RestAt(spec.target));
    env.SetTarget(spec.target);
    // Times are relative to the environment clock, which the state reset
    // above does not restart.
    const double t0 = env.sim_time();
    const std::vector<double>& m = spec.magnitudes;
    env.SetDisturbance(spec.kind == DisturbanceKind::kForce
                           ? DisturbanceSchedule::ForceSweep(
                                 m, axis, t0 + spec.warmup, spec.slot, spec.active)
                           : DisturbanceSchedule::TorqueSweep(
                                 m, axis, t0 + spec.warmup, spec.slot, spec.active));

    RunOutcome nominal = RunSteps(&env, controller, warmup, 0);
    SegmentReport head;
    head.label = Label(rep, "nominal");
    head.values = {
        {"magnitude", kNaN},
        {"peak_position_error", kNaN},
        {"peak_orientation_error_deg", kNaN},
        {"steady_position_error", Mean([&] {
           std::vector<double> v;
           for (const auto& r : nominal.rows) v.push_back(r.position_error);
           return v;
         }())},
        {"steady_orientation_error_deg", Mean([&] {
           std::vector<double> v;
           for (const auto& r : nominal.rows) {
             v.push_back(r.orientation_error * kRadToDeg);
           }
           return v;
         }())},
        {"post_wrench_axis_rate", kNaN},
        {"recovery_time", kNaN},
        {"unstable", nominal.termination.done ? 1.0 : 0.0},
        {"reached", 1.0},
    };
    part.segments.push_back(head);
    part.rows = nominal.rows;
    bool stopped = nominal.termination.done;

    for (size_t i = 0; i < m.size(); ++i) {
      SegmentReport segment;
      segment.label = Label(rep, "magnitude" + std::to_string(i));
      if (stopped) {
        segment.values = {{"magnitude", m[i]},
                          {"peak_position_error", kNaN},
                          {"peak_orientation_error_deg", kNaN},
                          {"steady_position_error", kNaN},
                          {"steady_orientation_error_deg", kNaN},
                          {"post_wrench_axis_rate", kNaN},
                          {"recovery_time", kNaN},
                          {"unstable", 1.0},
                          {"reached", 0.0}};
        part.segments.push_back(segment);
        continue;
      }
      RunOutcome run = RunSteps(&env, controller, slot, static_cast<int>(i) + 1);
      std::vector<double> p, o;
      for (const auto& r : run.rows) {
        p.push_back(r.position_error);
        o.push_back(r.orientation_error * kRadToDeg);
      }
      double axis_rate = kNaN;
      if (active >= 1 && static_cast<int>(run.rows.size()) >= active) {
        const TrajectoryRow& r = run.rows[active - 1];
        axis_rate = std::abs(
            axis.dot(r.state.orientation.Rotate(r.state.angular_velocity)));
      }
      // First step after the wrench from which both errors stay inside the
      // recovery band for `hold` steps.
      double recovery = kNaN;
      const int n = static_cast<int>(run.rows.size());
      for (int k = active; k + hold <= n && hold > 0; ++k) {
        bool ok = true;
        for (int j = k; j < k + hold && ok; ++j) {
          ok = p[j] < spec.recovery_position && o[j] < spec.recovery_orientation;
        }
        if (ok) {
          recovery = (k + 1 - active) * dt;
          break;
        }
      }
      const std::vector<double> tail_p(p.end() - std::min(n, hold), p.end());
      const std::vector<double> tail_o(o.end() - std::min(n, hold), o.end());
      const bool unstable = run.termination.done ||
                            Max(p) > spec.unstable_position_error;
      segment.values = {{"magnitude", m[i]},
                        {"peak_position_error", Max(p)},
                        {"peak_orientation_error_deg", Max(o)},
                        {"steady_position_error", Mean(tail_p)},
                        {"steady_orientation_error_deg", Mean(tail_o)},
                        {"post_wrench_axis_rate", axis_rate},
                        {"recovery_time", recovery},
                        {"unstable", unstable ? 1.0 : 0.0},
                        {"reached", 1.0}};
      part.segments.push_back(segment);
      part.rows.insert(part.rows.end(), run.rows.begin(), run.rows.end());
      stopped = unstable;
    }
    return part;
  });
}

MetricReport RunPayload(const Controller& controller,
                        const EvalSettings& settings, const PayloadSpec& spec) {
  const double dt = settings.env.control_dt;
  const int steps = StepsFor(spec.horizon, dt, "horizon");
  const int u0 = static_cast<int>(std::round(spec.windows.u_start / dt));
  const int u1 = static_cast<int>(std::round(spec.windows.u_end / dt));
  return Assemble("payload", settings, [&](int rep) {
    MetricReport part;
    for (size_t i = 0; i < spec.masses.size(); ++i) {
      TiltEnv env = MakeEnv(settings, rep);
      env.SetPhysicalParams(
          ApplyPayload(env.latents().params, spec.masses[i], spec.attach_offset));
      env.SetState(RestAt(spec.target));
      env.SetTarget(spec.target);
      RunOutcome run = RunSteps(&env, controller, steps, static_cast<int>(i));
      std::vector<double> dz;
      for (const auto& r : run.rows) {
        if (r.step >= u0 && r.step < u1) {
          dz.push_back(r.state.position.z() - r.target.position.z());
        }
      }
      SegmentReport segment;
      segment.label = Label(rep, "mass" + std::to_string(i));
      segment.values = {{"payload_mass", spec.masses[i]}};
      for (auto& v : SegmentMetrics(run.rows, dt, spec.windows)) {
        segment.values.push_back(v);
      }
      segment.values.emplace_back("u_z_error", Mean(dz));
      segment.values.emplace_back("terminated", run.termination.done ? 1.0 : 0.0);
      part.segments.push_back(segment);
      part.rows.insert(part.rows.end(), run.rows.begin(), run.rows.end());
    }
    return part;
  });
}

double LemniscateSpec::AngularRate() const {
  return std::isinf(period) ? 0.0 : 2.0 * kPi / period;
}

void LemniscateSpec::Validate() const {
  if (!(std::abs(attitude_amplitude) <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lemniscate roll/pitch amplitude must be within 0.5 rad");
  }
  if (!(period > 0.0) || !(duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lemniscate period and duration must be positive");
  }
}

TargetPose LemniscateSpec::At(double t) const {
  const double w = AngularRate();
  const double s = std::sin(w * t);
  TargetPose pose;
  pose.position = Vec3(amplitude_x * s, amplitude_y * std::sin(2.0 * w * t),
                       altitude + amplitude_z * s);
  const double yaw = std::fmod(w * t, 2.0 * kPi);
  pose.orientation = EulerToQuat({attitude_amplitude * s,
                                  attitude_amplitude * std::cos(w * t), yaw});
  return pose;
}

MetricReport RunTrajectory(const Controller& controller,
                           const EvalSettings& settings,
                           const LemniscateSpec& spec) {
  spec.Validate();
  const double dt = settings.env.control_dt;
  const int steps = static_cast<int>(std::round(spec.duration / dt));
  return Assemble("trajectory-tracking", settings, [&](int rep) {
    MetricReport part;
    TiltEnv env = MakeEnv(settings, rep);
    env.SetState(RestAt(spec.At(0.0)));
    env.SetTarget(spec.At(0.0));
    // After each step the target advances to the new time, so rows compare
    // state and reference at the same instant and the next action sees it.
    RunOutcome run = RunSteps(&env, controller, steps, 0, [&](int k) {
      env.SetTarget(spec.At(k * dt));
    });
    std::vector<double> p, o;
    for (const auto& r : run.rows) {
      p.push_back(r.position_error);
      o.push_back(r.orientation_error * kRadToDeg);
    }
    SegmentReport segment;
    segment.label = Label(rep, "lemniscate");
    segment.values = {{"position_error_mean", Mean(p)},
                      {"position_error_std", StdDev(p)},
                      {"position_error_max", Max(p)},
                      {"orientation_error_mean_deg", Mean(o)},
                      {"orientation_error_std_deg", StdDev(o)},
                      {"orientation_error_max_deg", Max(o)},
                      {"steps", static_cast<double>(run.rows.size())},
                      {"terminated", run.termination.done ? 1.0 : 0.0}};
    part.segments.push_back(segment);
    part.rows = std::move(run.rows);
    return part;
  });
}

HoverHoldResult RunHoverHold(const Controller& controller, const EnvConfig& env,
                             int episodes, uint64_t seed, double check_time,
                             double threshold, int num_threads) {
  const int steps = StepsFor(check_time, env.control_dt, "check time");
  HoverHoldResult result;
  result.position_errors.assign(episodes, 0.0);
  const EnvConfig config = EvalEnvConfig(env);
  ParallelFor(episodes, num_threads, [&](int e) {
    TiltEnv sim(config, e, seed);
    sim.Reset();
    double error = std::numeric_limits<double>::infinity();
    bool failed = false;
    for (int k = 0; k < steps; ++k) {
      const StepResult r = sim.Step(controller.Act(sim.observation()));
      if (r.termination.done) {
        failed = true;
        break;
      }
    }
    if (!failed) error = (sim.state().position - sim.target().position).norm();
    result.position_errors[e] = error;
  });
  for (double e : result.position_errors) result.successes += e < threshold;
  result.success_rate =
      episodes > 0 ? static_cast<double>(result.successes) / episodes : 0.0;
  return result;
}

std::string ReportToJson(const MetricReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = report.kind;
  j["seed"] = report.seed;
  j["control_dt"] = report.control_dt;
  j["num_segments"] = report.segments.size();
  ordered_json segments = ordered_json::array();
  for (const auto& segment : report.segments) {
    ordered_json s;
    s["label"] = segment.label;
    ordered_json metrics = ordered_json::object();
    for (const auto& [name, value] : segment.values) metrics[name] = Number(value);
    s["metrics"] = metrics;
    segments.push_back(s);
  }
  j["segments"] = segments;
  ordered_json aggregate = ordered_json::object();
  for (const auto& a : Aggregate(report)) {
    aggregate[a.name] = {{"count", a.count},
                         {"mean", Number(a.mean)},
                         {"min", Number(a.min)},
                         {"max", Number(a.max)}};
  }
  j["aggregate"] = aggregate;
  return j.dump(2) + "\n";
}

MetricReport ReportFromJson(const std::string& text) {
  MetricReport report;
  try {
    const ordered_json j = ordered_json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::kParse, "unsupported report schema version");
    }
    report.kind = j.at("kind").get<std::string>();
    report.seed = j.at("seed").get<uint64_t>();
    report.control_dt = j.at("control_dt").get<double>();
    for (const auto& s : j.at("segments")) {
      SegmentReport segment;
      segment.label = s.at("label").get<std::string>();
      for (const auto& [name, value] : s.at("metrics").items()) {
        segment.values.emplace_back(name, FromJsonNumber(value));
      }
      report.segments.push_back(segment);
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("report: ") + e.what());
  }
  return report;
}

EmittedFiles EmitReport(const MetricReport& report,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  EmittedFiles files;
  files.metrics = dir / "metrics.json";
  files.trajectory = dir / ("traj_" + report.kind + ".csv");
  WriteFileAtomic(files.metrics, ReportToJson(report));
  std::ostringstream csv;
  TrajectoryCsvWriter writer(&csv);
  for (const auto& row : report.rows) writer.Write(row);
  WriteFileAtomic(files.trajectory, csv.str());
  return files;
}

}  // namespace tiltrl
