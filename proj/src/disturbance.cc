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

#include "tiltrl/disturbance.h"

#include <algorithm>

#include "tiltrl/error.h"

namespace tiltrl {
namespace {

constexpr double kTimeTolerance = 1e-9;

}  // namespace

void DisturbanceSchedule::Add(const DisturbanceEntry& entry) {
  if (!(entry.duration >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "negative disturbance duration");
  }
  const double end = entry.start + entry.duration;
  for (const auto& other : entries_) {
    const double other_end = other.start + other.duration;
    if (entry.start < other_end - kTimeTolerance &&
        other.start < end - kTimeTolerance) {
      throw Error(ErrorCode::kInvalidArgument, "overlapping disturbances");
    }
  }
  entries_.push_back(entry);
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
}

WorldWrench DisturbanceSchedule::At(double t) const {
  for (const auto& entry : entries_) {
    if (t >= entry.start - kTimeTolerance &&
        t < entry.start + entry.duration - kTimeTolerance) {
      return entry.wrench;
    }
  }
  return {};
}

DisturbanceSchedule DisturbanceSchedule::ForceSweep(
    const std::vector<double>& magnitudes, const Vec3& axis, double warmup,
    double slot, double active) {
  DisturbanceSchedule schedule;
  const Vec3 direction = axis.normalized();
  for (size_t k = 0; k < magnitudes.size(); ++k) {
    DisturbanceEntry entry;
    entry.start = warmup + static_cast<double>(k) * slot;
    entry.duration = active;
    entry.wrench.force = magnitudes[k] * direction;
    schedule.Add(entry);
  }
  return schedule;
}

DisturbanceSchedule DisturbanceSchedule::TorqueSweep(
    const std::vector<double>& magnitudes, const Vec3& axis, double warmup,
    double slot, double active) {
  DisturbanceSchedule schedule;
  const Vec3 direction = axis.normalized();
  for (size_t k = 0; k < magnitudes.size(); ++k) {
    DisturbanceEntry entry;
    entry.start = warmup + static_cast<double>(k) * slot;
    entry.duration = active;
    entry.wrench.torque = magnitudes[k] * direction;
    schedule.Add(entry);
  }
  return schedule;
}

}  // namespace tiltrl
