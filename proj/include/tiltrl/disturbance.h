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

#ifndef TILTRL_DISTURBANCE_H_
#define TILTRL_DISTURBANCE_H_

#include <vector>

#include "tiltrl/dynamics.h"

namespace tiltrl {

// A world-frame wrench held constant on [start, start + duration).
struct DisturbanceEntry {
  double start = 0.0;     // s
  double duration = 0.0;  // s
  WorldWrench wrench;
};

// Piecewise-constant external wrench schedule. Entries may not overlap.
class DisturbanceSchedule {
 public:
  DisturbanceSchedule() = default;

  // Throws kInvalidArgument on negative duration or overlap with an existing
  // entry.
  void Add(const DisturbanceEntry& entry);

  // Wrench active at time t. Boundaries are compared with a 1e-9 s tolerance
  // so windows aligned to the physics step land on whole substeps.
  WorldWrench At(double t) const;

  bool empty() const { return entries_.empty(); }
  const std::vector<DisturbanceEntry>& entries() const { return entries_; }

  // One entry per magnitude: `magnitudes[k] * axis` (force or torque) held
  // for `active` seconds starting at warmup + k * slot.
  static DisturbanceSchedule ForceSweep(const std::vector<double>& magnitudes,
                                        const Vec3& axis, double warmup,
                                        double slot, double active);
  static DisturbanceSchedule TorqueSweep(const std::vector<double>& magnitudes,
                                         const Vec3& axis, double warmup,
                                         double slot, double active);

 private:
  std::vector<DisturbanceEntry> entries_;
};

}  // namespace tiltrl

#endif  // TILTRL_DISTURBANCE_H_
