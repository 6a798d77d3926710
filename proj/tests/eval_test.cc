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

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "tiltrl/checkpoint.h"
#include "tiltrl/error.h"

namespace tiltrl {
namespace {

EvalSettings Nominal() {
  EvalSettings s;
  s.env.randomization = RandomizationConfig::Disabled();
  s.seed = 5;
  return s;
}

TargetPose Level(double x, double y, double z) {
  return {Vec3(x, y, z), UnitQuaternion::Identity()};
}

// Column index by name in the trajectory CSV header.
std::map<std::string, int> HeaderIndex() {
  std::map<std::string, int> index;
  std::istringstream in(TrajectoryCsvHeader());
  std::string name;
  for (int i = 0; std::getline(in, name, ','); ++i) index[name] = i;
  return index;
}

std::vector<std::vector<double>> ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

TEST(WaypointsTest, DefaultSetStartsLevelAt80Centimeters) {
  const auto poses = DefaultWaypoints();
  ASSERT_EQ(poses.size(), 5u);
  EXPECT_EQ(poses[0].position, Vec3(0.0, 0.0, 0.8));
  EXPECT_LT(QuatToEuler(poses[0].orientation).AsVector().norm(), 1e-15);
  EXPECT_NEAR(QuatToEuler(poses[1].orientation).roll, 45.0 * kDegToRad, 1e-12);
  EXPECT_NEAR(QuatToEuler(poses[4].orientation).yaw, 90.0 * kDegToRad, 1e-12);
}

TEST(WaypointsTest, HoverCommandHoldsAtTarget) {
  WaypointSpec spec;
  spec.poses = {Level(0, 0, 1.5)};
  spec.start_at_first_target = true;
  const HoverController hover;
  const MetricReport r = RunWaypoints(hover, Nominal(), spec);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_LT(r.segments[0].Get("u_position_error"), 0.05);
  EXPECT_EQ(r.segments[0].Get("steps"), 800);
  EXPECT_EQ(r.rows.size(), 800u);
  EXPECT_EQ(r.rows.back().step, 800);
}

TEST(WaypointsTest, RandomPosesAreDeterministic) {
  EvalSettings s = Nominal();
  s.repetitions = 2;
  s.num_threads = 2;
  WaypointSpec spec;
  spec.poses = RandomWaypoints(s.env, 100, 3);
  spec.horizon = 2.0;
  spec.windows = {1.5, 1.75, 0.5, 1.5};
  EXPECT_EQ(RandomWaypoints(s.env, 100, 3)[57].position, spec.poses[57].position);
  const HoverController hover;
  const MetricReport a = RunWaypoints(hover, s, spec);
  s.num_threads = 1;
  const MetricReport b = RunWaypoints(hover, s, spec);
  EXPECT_EQ(a.segments.size(), 200u);
  EXPECT_EQ(ReportToJson(a), ReportToJson(b));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (size_t k = 0; k < a.rows.size(); k += 997) {
    EXPECT_EQ(FormatTrajectoryRow(a.rows[k]), FormatTrajectoryRow(b.rows[k]));
  }
}

TEST(WaypointsTest, WindowsRecomputeFromCsv) {
  EvalSettings s = Nominal();
  WaypointSpec spec;
  spec.poses = DefaultWaypoints();
  const HoverController hover;
  MetricReport r = RunWaypoints(hover, s, spec);
  const auto dir = std::filesystem::path(::testing::TempDir()) / "windows";
  const EmittedFiles files = EmitReport(r, dir);
  const auto rows = ParseCsv(ReadFile(files.trajectory));
  const auto col = HeaderIndex();
  ASSERT_EQ(rows.size(), r.rows.size());
  for (size_t seg = 0; seg < r.segments.size(); ++seg) {
    double up = 0, uo = 0, lp = 0, lo = 0;
    int nu = 0, nl = 0;
    for (const auto& row : rows) {
      if (static_cast<size_t>(row[col.at("segment")]) != seg) continue;
      const double t = row[col.at("step")] * s.env.control_dt;
      const double p = row[col.at("position_error")];
      const double o = row[col.at("orientation_error")] * 180.0 / kPi;
      if (t >= 7.0 - 1e-9 && t < 7.5 - 1e-9) {
        up += p;
        uo += o;
        ++nu;
      }
      if (t >= 1.0 - 1e-9 && t < 7.0 - 1e-9) {
        lp += p;
        lo += o;
        ++nl;
      }
    }
    const SegmentReport& m = r.segments[seg];
    ASSERT_EQ(nu, 50);
    ASSERT_EQ(nl, 600);
    EXPECT_NEAR(m.Get("u_position_error"), up / nu, 1e-9);
    EXPECT_NEAR(m.Get("u_orientation_error_deg"), uo / nu, 1e-9);
    EXPECT_NEAR(m.Get("l_position_error"), lp / nl, 1e-9);
    EXPECT_NEAR(m.Get("l_orientation_error_deg"), lo / nl, 1e-9);
  }
}

TEST(WaypointsTest, RejectsOverlappingWindows) {
  WaypointSpec spec;
  spec.poses = {Level(0, 0, 1)};
  spec.windows.l_end = 7.2;
  const HoverController hover;
  EXPECT_THROW(RunWaypoints(hover, Nominal(), spec), Error);
  spec.windows = MetricWindows();
  spec.horizon = 7.25;
  EXPECT_THROW(RunWaypoints(hover, Nominal(), spec), Error);
}

TEST(WaypointsTest, StopsOnTerminationWithPartialResults) {
  EvalSettings s = Nominal();
  s.env.safety_radius = 0.5;
  WaypointSpec spec;
  spec.poses = {Level(0, 0, 1), Level(0, 0, 1)};
  spec.start = Level(0, 0, 1.2);
  // Hover thrust with a tilted body drifts out of the small safety ball.
  spec.start.orientation = EulerToQuat({0.4, 0.0, 0.0});
  const HoverController hover;
  const MetricReport r = RunWaypoints(hover, s, spec);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_EQ(r.segments[0].Get("terminated"), 1.0);
  EXPECT_LT(r.segments[0].Get("steps"), 800);
  EXPECT_TRUE(std::isnan(r.segments[0].Get("u_position_error")));
}

TEST(DisturbanceTest, ZeroMagnitudeMatchesNominalHover) {
  const HoverController hover;
  DisturbanceSpec zero = DisturbanceSpec::DefaultTorque();
  zero.magnitudes = {0.0};
  DisturbanceSpec none = zero;
  none.magnitudes = {};
  none.warmup = zero.warmup + zero.slot;
  const MetricReport a = RunDisturbance(hover, Nominal(), zero);
  const MetricReport b = RunDisturbance(hover, Nominal(), none);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (size_t k = 0; k < a.rows.size(); ++k) {
    ASSERT_EQ(a.rows[k].position_error, b.rows[k].position_error);
    ASSERT_EQ(a.rows[k].orientation_error, b.rows[k].orientation_error);
  }
}

TEST(DisturbanceTest, ImpulseMatchesMomentum) {
  const HoverController hover;
  DisturbanceSpec spec = DisturbanceSpec::DefaultTorque();
  spec.magnitudes = {15.0};
  spec.target = Level(0, 0, 1.5);
  spec.warmup = 0.5;
  const MetricReport r = RunDisturbance(hover, Nominal(), spec);
  ASSERT_EQ(r.segments.size(), 2u);
  const double expected = 15.0 * 0.05 / 0.0627;
  const double rate = r.segments[1].Get("post_wrench_axis_rate");
  EXPECT_GE(rate, expected * (1 - 1e-3));
  EXPECT_NEAR(rate, expected, 0.02 * expected);
}

TEST(DisturbanceTest, DefaultForceSweepReaches100NewtonsAndFlagsInstability) {
  const DisturbanceSpec spec = DisturbanceSpec::DefaultForce();
  EXPECT_EQ(spec.magnitudes.back(), 100.0);
  EXPECT_EQ(DisturbanceSpec::DefaultTorque().active, 0.05);
  const HoverController hover;
  DisturbanceSpec big = spec;
  big.magnitudes = {100.0, 10.0};
  const MetricReport r = RunDisturbance(hover, Nominal(), big);
  ASSERT_EQ(r.segments.size(), 3u);
  EXPECT_EQ(r.segments[1].Get("unstable"), 1.0);
  EXPECT_EQ(r.segments[2].Get("reached"), 0.0);
  EXPECT_TRUE(std::isnan(r.segments[2].Get("peak_position_error")));
}

TEST(DisturbanceTest, RecoveryTimeAfterSmallForce) {
  // Constant force 0 keeps the hover inside the band from the first step.
  const HoverController hover;
  DisturbanceSpec spec = DisturbanceSpec::DefaultForce();
  spec.target = Level(0, 0, 1.5);
  spec.magnitudes = {0.0};
  const MetricReport r = RunDisturbance(hover, Nominal(), spec);
  EXPECT_NEAR(r.segments[1].Get("recovery_time"), 0.01, 1e-12);
  EXPECT_EQ(r.segments[1].Get("unstable"), 0.0);
}

TEST(PayloadTest, HeavierPayloadSinks) {
  const HoverController hover;
  PayloadSpec spec;
  spec.masses = {0.0, 0.05};
  const MetricReport r = RunPayload(hover, Nominal(), spec);
  ASSERT_EQ(r.segments.size(), 2u);
  EXPECT_LT(std::abs(r.segments[0].Get("u_z_error")), 1e-6);
  // Free fall under the unbalanced weight: z = -a t^2 / 2 averaged over
  // [7.0, 7.5) s with a = 0.05 g / (m + 0.05).
  const double a = 0.05 * 9.81 / (3.0386 + 0.05);
  double want = 0.0;
  for (int k = 700; k < 750; ++k) want -= 0.5 * a * (k * 0.01) * (k * 0.01) / 50;
  EXPECT_NEAR(r.segments[1].Get("u_z_error"), want, 0.02 * std::abs(want));
  EXPECT_EQ(r.segments[1].Get("payload_mass"), 0.05);
}

TEST(LemniscateTest, PeriodicAndBounded) {
  const LemniscateSpec spec;
  const double period = spec.period;
  for (double t : {0.0, 0.37, 3.3, 11.9, 17.05}) {
    const TargetPose a = spec.At(t);
    const TargetPose b = spec.At(t + period);
    EXPECT_LT((a.position - b.position).norm(), 1e-12);
    EXPECT_LT((a.orientation.Matrix() - b.orientation.Matrix()).norm(), 1e-12);
  }
  for (int k = 0; k <= 2000; ++k) {
    const EulerAngles e = QuatToEuler(spec.At(k * period / 2000).orientation);
    EXPECT_LE(std::abs(e.roll), 0.5);
    EXPECT_LE(std::abs(e.pitch), 0.5);
  }
  LemniscateSpec bad;
  bad.attitude_amplitude = 0.6;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(LemniscateTest, ZeroSpeedMatchesWaypointHover) {
  LemniscateSpec still;
  still.period = std::numeric_limits<double>::infinity();
  still.duration = 3.0;
  const HoverController hover;
  EvalSettings s;
  s.seed = 21;
  const MetricReport track = RunTrajectory(hover, s, still);
  WaypointSpec spec;
  spec.poses = {still.At(0.0)};
  spec.start_at_first_target = true;
  spec.horizon = 8.0;
  const MetricReport hold = RunWaypoints(hover, s, spec);
  ASSERT_EQ(track.rows.size(), hold.rows.size() > 300 ? 300u : hold.rows.size());
  for (size_t k = 0; k < track.rows.size(); ++k) {
    ASSERT_EQ(track.rows[k].position_error, hold.rows[k].position_error);
    ASSERT_EQ(track.rows[k].orientation_error, hold.rows[k].orientation_error);
  }
}

TEST(LemniscateTest, RowsCompareSameInstant) {
  LemniscateSpec spec;
  spec.duration = 1.0;
  const HoverController hover;
  const MetricReport r = RunTrajectory(hover, Nominal(), spec);
  for (const auto& row : r.rows) {
    const TargetPose want = spec.At(row.step * 0.01);
    EXPECT_LT((row.target.position - want.position).norm(), 1e-15);
  }
}

TEST(HoverHoldTest, NominalHoverHolds) {
  EnvConfig env;
  env.task = TaskMode::kHover;
  env.spawn_position = Vec3(0, 0, 1.5);
  env.randomization = RandomizationConfig::Disabled();
  const HoverController hover;
  const HoverHoldResult r = RunHoverHold(hover, env, 10, 1, 4.0, 0.3);
  EXPECT_EQ(r.successes, 10);
  EXPECT_EQ(r.success_rate, 1.0);
  EXPECT_LT(r.position_errors[3], 1e-6);
}

TEST(ReportTest, EmptyRun) {
  MetricReport empty;
  empty.kind = "waypoints";
  const auto dir = std::filesystem::path(::testing::TempDir()) / "empty_report";
  const EmittedFiles files = EmitReport(empty, dir);
  EXPECT_EQ(ReadFile(files.trajectory), TrajectoryCsvHeader() + "\n");
  const auto j = nlohmann::json::parse(ReadFile(files.metrics));
  EXPECT_EQ(j["num_segments"], 0);
  EXPECT_EQ(j["segments"].size(), 0u);
  EXPECT_EQ(j["schema_version"], 1);
}

TEST(ReportTest, ReemitIsByteIdenticalAndRoundTrips) {
  const HoverController hover;
  DisturbanceSpec spec = DisturbanceSpec::DefaultTorque();
  spec.magnitudes = {0.0, 5.0};
  const MetricReport r = RunDisturbance(hover, Nominal(), spec);
  const auto dir = std::filesystem::path(::testing::TempDir());
  const EmittedFiles a = EmitReport(r, dir / "a");
  const EmittedFiles b = EmitReport(r, dir / "b");
  EXPECT_EQ(ReadFile(a.metrics), ReadFile(b.metrics));
  EXPECT_EQ(ReadFile(a.trajectory), ReadFile(b.trajectory));
  EXPECT_EQ(a.trajectory.filename(), "traj_disturbance-torque.csv");

  const std::string text = ReadFile(a.metrics);
  // Generic parse and dump keeps every value; the typed reader agrees.
  const auto generic = nlohmann::ordered_json::parse(text);
  EXPECT_EQ(generic.dump(2) + "\n", text);
  const MetricReport back = ReportFromJson(text);
  EXPECT_EQ(ReportToJson(back), text);
  EXPECT_TRUE(std::isnan(back.segments[0].Get("magnitude")));
}

TEST(ReportTest, AggregateSkipsNonFinite) {
  MetricReport r;
  r.segments = {{"a", {{"x", 1.0}, {"y", std::nan("")}}},
                {"b", {{"x", 3.0}, {"y", 2.0}}}};
  const auto agg = Aggregate(r);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].mean, 2.0);
  EXPECT_EQ(agg[0].max, 3.0);
  EXPECT_EQ(agg[1].count, 1);
  EXPECT_EQ(agg[1].mean, 2.0);
}

TEST(ReportTest, IoErrorNamesPath) {
  MetricReport r;
  r.kind = "payload";
  try {
    EmitReport(r, "/proc/tiltrl_no_such_dir");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/proc/tiltrl_no_such_dir"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace tiltrl
