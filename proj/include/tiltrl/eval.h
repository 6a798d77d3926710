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

// Evaluation protocols: sequential waypoint hovering with U/L window metrics,
// force and impulse-torque disturbance sweeps, payload variation, lemniscate
// tracking and hover holding, plus report emission.

#ifndef TILTRL_EVAL_H_
#define TILTRL_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tiltrl/actor_critic.h"
#include "tiltrl/environment.h"
#include "tiltrl/trajectory_log.h"

namespace tiltrl {

// Maps the current observation to an action. Implementations must be safe to
// call concurrently on distinct observations.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual Action Act(const Observation& observation) const = 0;
};

// Greedy policy: the Gaussian mean.
class PolicyController : public Controller {
 public:
  explicit PolicyController(const ActorCritic* net) : net_(net) {}
  Action Act(const Observation& observation) const override;

 private:
  const ActorCritic* net_;
};

// Always the zero action, i.e. joints at zero and hover thrust.
class HoverController : public Controller {
 public:
  Action Act(const Observation&) const override { return Action{}; }
};

// Named scalar metrics of one segment. NaN marks an empty window.
struct SegmentReport {
  std::string label;
  std::vector<std::pair<std::string, double>> values;

  // Throws kInvalidArgument for unknown names.
  double Get(const std::string& name) const;
};

struct MetricReport {
  std::string kind;
  uint64_t seed = 0;
  double control_dt = 0.01;
  std::vector<SegmentReport> segments;
  std::vector<TrajectoryRow> rows;
};

// Mean, min and max of each metric over segments, skipping non-finite
// values; names follow the first segment's order.
struct AggregateMetric {
  std::string name;
  int count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};
std::vector<AggregateMetric> Aggregate(const MetricReport& report);

// Half-open time windows inside each segment, in seconds after the segment
// start: a row at segment-local step s has time s * dt.
struct MetricWindows {
  double u_start = 7.0;
  double u_end = 7.5;
  double l_start = 1.0;
  double l_end = 7.0;
};

// U/L position and orientation errors, speed, joint tracking and thrust
// statistics from the rows of one segment.
std::vector<std::pair<std::string, double>> SegmentMetrics(
    const std::vector<TrajectoryRow>& rows, double dt,
    const MetricWindows& windows);

struct EvalSettings {
  EnvConfig env;
  uint64_t seed = 1;
  int repetitions = 1;
  int num_threads = 1;
};

struct WaypointSpec {
  std::vector<TargetPose> poses;
  double horizon = 8.0;  // s per pose
  MetricWindows windows;
  // Initial pose, at rest with joints at zero. When unset the robot starts
  // at the first target.
  bool start_at_first_target = false;
  TargetPose start{Vec3(0.0, 0.0, 1.0), UnitQuaternion::Identity()};
};

// Five real-world poses: [0 0 0.8] m level, then rolled, pitched and yawed
// targets.
std::vector<TargetPose> DefaultWaypoints();
// Targets drawn like training targets.
std::vector<TargetPose> RandomWaypoints(const EnvConfig& env, int count,
                                        uint64_t seed);
TargetPose SampleTargetPose(const EnvConfig& env, std::mt19937_64& rng);

// Sequential pose reaching; one segment per pose and repetition. Stops a
// repetition early on safety or non-finite termination and marks the segment.
MetricReport RunWaypoints(const Controller& controller,
                          const EvalSettings& settings,
                          const WaypointSpec& spec);

enum class DisturbanceKind { kForce, kTorque };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::kForce;
  std::vector<double> magnitudes;  // N or N m
  Vec3 axis{0.0, 0.0, -1.0};       // world frame
  TargetPose target{Vec3(0.0, 0.0, 1.5),
                    EulerToQuat({25.0 * kDegToRad, 0.0, 0.0})};
  double warmup = 2.0;  // s of undisturbed hover before the first slot
  double slot = 4.0;    // s per magnitude
  double active = 2.0;  // s the wrench is applied at the start of each slot
  // A slot whose position error exceeds this is flagged unstable and ends
  // the run.
  double unstable_position_error = 1.0;  // m
  double recovery_position = 0.05;       // m
  double recovery_orientation = 5.0;     // deg
  double recovery_hold = 0.5;            // s

  // Force steps along -z held 2 s in 4 s slots, 0 to 100 N.
  static DisturbanceSpec DefaultForce();
  // 0.05 s torque impulses about x in 2 s slots, 0 to 30 N m.
  static DisturbanceSpec DefaultTorque();
};

// One segment per magnitude with peak and steady errors, the peak angular
// rate about the axis right after the wrench ends, the recovery time after
// it ends (NaN when not recovered within the slot) and an unstable flag.
// Magnitudes not reached after an instability are reported as unstable
// with NaN statistics.
MetricReport RunDisturbance(const Controller& controller,
                            const EvalSettings& settings,
                            const DisturbanceSpec& spec);

struct PayloadSpec {
  std::vector<double> masses{0.0, 0.25, 0.5, 0.75, 1.0};  // kg
  Vec3 attach_offset = Vec3::Zero();                      // body frame
  TargetPose target{Vec3(0.0, 0.0, 1.0), UnitQuaternion::Identity()};
  double horizon = 8.0;
  MetricWindows windows;
};

// Hover at the target from rest with the payload attached; one segment per
// mass with the waypoint metrics plus mean z error.
MetricReport RunPayload(const Controller& controller,
                        const EvalSettings& settings, const PayloadSpec& spec);

// p(t) = (A_x sin wt, A_y sin 2wt, z0 + A_z sin wt),
// roll = r sin wt, pitch = r cos wt, yaw = wt mod 2 pi.
struct LemniscateSpec {
  double amplitude_x = 1.0;  // m
  double amplitude_y = 0.5;  // m
  double amplitude_z = 0.2;  // m
  double altitude = 1.0;     // m
  double period = 20.0;      // s; infinite means a fixed pose
  double attitude_amplitude = 0.4;  // rad, at most 0.5
  double duration = 20.0;    // s

  double AngularRate() const;
  // Throws kInvalidArgument for |attitude_amplitude| > 0.5 or non-positive
  // duration or period.
  void Validate() const;
  TargetPose At(double t) const;
};

// Streams the moving target each control step from rest at the initial
// pose; one segment per repetition with mean/std position and orientation
// error.
MetricReport RunTrajectory(const Controller& controller,
                           const EvalSettings& settings,
                           const LemniscateSpec& spec);

struct HoverHoldResult {
  std::vector<double> position_errors;  // m, at the check time
  int successes = 0;
  double success_rate = 0.0;
};

// Episodes of the environment's own reset distribution with the controller
// in the loop; success when ||p_e|| < threshold at `check_time`.
HoverHoldResult RunHoverHold(const Controller& controller,
                             const EnvConfig& env, int episodes, uint64_t seed,
                             double check_time, double threshold,
                             int num_threads = 1);

// JSON with schema_version, kind, seed, per-segment metrics and aggregates;
// keys keep insertion order and non-finite values become null.
std::string ReportToJson(const MetricReport& report);
// Inverse of ReportToJson for the scalar parts (rows are not included).
MetricReport ReportFromJson(const std::string& text);

struct EmittedFiles {
  std::filesystem::path metrics;
  std::filesystem::path trajectory;
};

// Writes metrics.json and traj_<kind>.csv into `dir`, creating it. IO
// failures raise kIo naming the path.
EmittedFiles EmitReport(const MetricReport& report,
                        const std::filesystem::path& dir);

}  // namespace tiltrl

#endif  // TILTRL_EVAL_H_
