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

// Actuator identification: bivariate rotor thrust polynomials and the
// torque-to-thrust ratio from thrust-stand logs, and second-order joint servo
// parameters from position response logs.

#ifndef TILTRL_SYSID_H_
#define TILTRL_SYSID_H_

#include <filesystem>
#include <vector>

#include "tiltrl/actuators.h"

namespace tiltrl {

struct ThrustSample {
  double cmd = 0.0;
  double voltage = 0.0;  // V
  double thrust = 0.0;   // N
  double torque = 0.0;   // N m
};

struct RotorFit {
  int degree_cmd = 2;
  int degree_voltage = 1;
  // Basis cmd^i V^j ordered with i fastest:
  // {1, cmd, cmd^2, V, cmd V, cmd^2 V} for the default degrees.
  std::vector<double> coefficients;
  double rms_residual = 0.0;  // N
  // Nondecreasing in cmd at each checked voltage.
  std::vector<double> checked_voltages;
  std::vector<bool> monotone_at_voltage;
  double cmd_min = 0.0;
  double cmd_max = 0.0;
  double voltage_min = 0.0;
  double voltage_max = 0.0;

  double Evaluate(double cmd, double voltage) const;
  bool monotone() const;
  // Copies the fitted polynomial and ranges into `base`; requires the default
  // degrees, which match the RotorModel basis.
  RotorModel ToRotorModel(const RotorModel& base) const;
};

// Least-squares fit via column-pivoted QR on scaled columns. Throws
// kInsufficientData with fewer than three samples per coefficient,
// kRankDeficient when the design matrix is numerically singular, and
// kInvalidArgument on negative or non-finite samples.
RotorFit FitRotorPolynomial(const std::vector<ThrustSample>& samples,
                            int degree_cmd = 2, int degree_voltage = 1);

// RMS of thrust minus fit over `samples`.
double RotorResidualRms(const RotorFit& fit,
                        const std::vector<ThrustSample>& samples);

// Slope of torque on thrust through the origin. Throws kInsufficientData
// with fewer than two samples of nonzero thrust.
double FitTorqueRatio(const std::vector<ThrustSample>& samples);

// Joint response sampled uniformly: command q*(t) and measurement q(t).
struct JointResponseLog {
  std::vector<double> time;    // s
  std::vector<double> q_cmd;   // rad
  std::vector<double> q_meas;  // rad

  size_t size() const { return time.size(); }
  // Throws kInvalidArgument on mismatched lengths, fewer than 3 samples,
  // non-monotone time or non-uniform sampling.
  double SamplePeriod() const;
};

struct JointFitOptions {
  int grid_omega = 25;  // log-spaced over [omega_min, omega_max]
  int grid_zeta = 20;   // log-spaced over [zeta_min, zeta_max]
  double omega_min = 1.0;
  double omega_max = 200.0;
  double zeta_min = 0.05;
  double zeta_max = 2.0;
  int max_iterations = 100;
  double tolerance = 1e-10;  // relative parameter step
};

struct JointFit {
  double omega_n = 0.0;  // rad/s
  double zeta = 0.0;
  double kp = 0.0;
  double kd = 0.0;
  double rms_residual = 0.0;  // rad
  int iterations = 0;
};

// Servo with gains set from (omega_n, zeta) and the inertia of `base`.
JointServo ServoFromModal(const JointServo& base, double omega_n, double zeta);

// Replays the command log through JointStep with a zero-order hold, starting
// at rest at q_meas[0]. Returns q at every sample time.
std::vector<double> SimulateJointResponse(const JointServo& servo,
                                          const JointResponseLog& log);

// Grid-seeded Gauss-Newton over (omega_n, zeta) minimizing simulated minus
// measured position; `base` supplies the assumed inertia and the limits.
// Throws kNoConvergence, with the best parameters found in the message, when
// the log has no excitation or the iteration limit is reached.
JointFit FitJointSecondOrder(const JointResponseLog& log,
                             const JointServo& base,
                             const JointFitOptions& options = {});

// CSV logs with a header row naming the columns in any order:
// cmd,voltage,thrust,torque and t,q_cmd,q_meas.
std::vector<ThrustSample> ReadThrustCsv(const std::filesystem::path& path);
JointResponseLog ReadJointCsv(const std::filesystem::path& path);
void WriteThrustCsv(const std::filesystem::path& path,
                    const std::vector<ThrustSample>& samples);
void WriteJointCsv(const std::filesystem::path& path,
                   const JointResponseLog& log);

}  // namespace tiltrl

#endif  // TILTRL_SYSID_H_
