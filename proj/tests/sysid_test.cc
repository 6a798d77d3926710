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

#include "tiltrl/sysid.h"

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "tiltrl/checkpoint.h"
#include "tiltrl/error.h"
#include "tiltrl/random.h"
#include "tiltrl/rotations.h"

namespace tiltrl {
namespace {

// Physically plausible thrust map with every basis term present:
// f = 0.1 + 0.5 c + 2 c^2 + V (0.002 + 0.03 c + 0.6 c^2).
const std::vector<double> kTruth{0.1, 0.5, 2.0, 0.002, 0.03, 0.6};

double TruthThrust(double c, double v) {
  return kTruth[0] + kTruth[1] * c + kTruth[2] * c * c +
         v * (kTruth[3] + kTruth[4] * c + kTruth[5] * c * c);
}

std::vector<ThrustSample> SyntheticThrust(int n, double noise, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ThrustSample> out(n);
  for (auto& s : out) {
    s.cmd = Uniform01(rng);
    s.voltage = UniformRange(rng, 21.0, 25.2);
    const double f = TruthThrust(s.cmd, s.voltage);
    s.thrust = f * (1.0 + noise * StandardNormal(rng));
    s.torque = 0.0165 * s.thrust;
  }
  return out;
}

// Multi-sine excitation, 5 s at 200 Hz, played through the simulator.
JointResponseLog MultiSineLog(const JointServo& servo) {
  JointResponseLog log;
  const double dt = 0.005;
  for (int k = 0; k < 1000; ++k) {
    const double t = k * dt;
    double q = 0.0;
    for (double hz : {1.0, 3.0, 6.0, 9.0}) q += 0.05 * std::sin(2 * kPi * hz * t);
    log.time.push_back(t);
    log.q_cmd.push_back(q);
  }
  log.q_meas = log.q_cmd;  // placeholder for the replay's initial state
  log.q_meas[0] = 0.0;
  log.q_meas = SimulateJointResponse(servo, log);
  return log;
}

TEST(RotorFitTest, NoiselessRecoversCoefficients) {
  const RotorFit fit = FitRotorPolynomial(SyntheticThrust(60, 0.0, 1));
  ASSERT_EQ(fit.coefficients.size(), 6u);
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(fit.coefficients[k], kTruth[k], 1e-9 * std::abs(kTruth[k]))
        << k;
  }
  EXPECT_LT(fit.rms_residual, 1e-12);
  EXPECT_TRUE(fit.monotone());
  EXPECT_EQ(fit.checked_voltages.size(), 9u);
}

TEST(RotorFitTest, MatchesNormalEquationsOracle) {
  const auto samples = SyntheticThrust(500, 0.01, 2);
  const RotorFit fit = FitRotorPolynomial(samples);
  Eigen::MatrixXd x(500, 6);
  Eigen::VectorXd y(500);
  for (int r = 0; r < 500; ++r) {
    const double c = samples[r].cmd;
    const double v = samples[r].voltage;
    x.row(r) << 1, c, c * c, v, c * v, c * c * v;
    y[r] = samples[r].thrust;
  }
  const Eigen::VectorXd b = x.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(fit.coefficients[k], b[k], 1e-7 * std::max(1.0, std::abs(b[k])));
  }
  // The fitted map tracks the true one to well within 2 % of full thrust.
  double worst = 0.0;
  for (double c = 0.0; c <= 1.0; c += 0.05) {
    for (double v = 21.0; v <= 25.2; v += 0.2) {
      worst = std::max(worst, std::abs(fit.Evaluate(c, v) - TruthThrust(c, v)));
    }
  }
  EXPECT_LT(worst, 0.02 * TruthThrust(1.0, 25.2));
}

TEST(RotorFitTest, HeldOutResidual) {
  const auto samples = SyntheticThrust(500, 0.01, 3);
  const std::vector<ThrustSample> train(samples.begin(), samples.begin() + 400);
  const std::vector<ThrustSample> test(samples.begin() + 400, samples.end());
  const RotorFit fit = FitRotorPolynomial(train);
  EXPECT_LT(RotorResidualRms(fit, test), 2.0 * fit.rms_residual);
}

TEST(RotorFitTest, Errors) {
  std::vector<ThrustSample> constant(40, {0.5, 24.0, 10.0, 0.165});
  try {
    FitRotorPolynomial(constant);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
  // Voltage never varies: the V columns duplicate the cmd columns.
  auto one_voltage = SyntheticThrust(60, 0.0, 4);
  for (auto& s : one_voltage) s.voltage = 24.0;
  EXPECT_THROW(FitRotorPolynomial(one_voltage), Error);
  try {
    FitRotorPolynomial(SyntheticThrust(17, 0.0, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
  auto negative = SyntheticThrust(60, 0.0, 6);
  negative[3].thrust = -1.0;
  EXPECT_THROW(FitRotorPolynomial(negative), Error);
}

TEST(RotorFitTest, NonMonotoneDetected) {
  auto samples = SyntheticThrust(60, 0.0, 7);
  for (auto& s : samples) s.thrust = 5.0 + 4.0 * (s.cmd - 0.5) * (s.cmd - 0.5);
  EXPECT_FALSE(FitRotorPolynomial(samples).monotone());
}

TEST(RotorFitTest, ConvertsToRotorModel) {
  const RotorFit fit = FitRotorPolynomial(SyntheticThrust(60, 0.0, 8));
  const RotorModel model = fit.ToRotorModel(RotorModel());
  EXPECT_NEAR(model.Polynomial(0.7, 23.0), TruthThrust(0.7, 23.0), 1e-9);
  const RotorFit cubic = FitRotorPolynomial(SyntheticThrust(60, 0.0, 8), 3, 1);
  EXPECT_NEAR(cubic.Evaluate(0.7, 23.0), TruthThrust(0.7, 23.0), 1e-9);
  EXPECT_THROW(cubic.ToRotorModel(RotorModel()), Error);
}

TEST(TorqueRatioTest, Examples) {
  auto samples = SyntheticThrust(50, 0.0, 9);
  EXPECT_DOUBLE_EQ(FitTorqueRatio(samples), 0.0165);
  for (auto& s : samples) s.torque = 0.0;
  EXPECT_EQ(FitTorqueRatio(samples), 0.0);
  std::mt19937_64 rng(10);
  for (auto& s : samples) s.torque = 0.0165 * s.thrust * (1 + 0.01 * StandardNormal(rng));
  EXPECT_NEAR(FitTorqueRatio(samples), 0.0165, 0.02 * 0.0165);
  std::vector<ThrustSample> few{{0.5, 24, 3.0, 0.05}, {0.0, 24, 0.0, 0.0}};
  try {
    FitTorqueRatio(few);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(JointFitTest, RecoversSimulatorParameters) {
  const JointServo truth;
  const JointResponseLog log = MultiSineLog(truth);
  const JointFit fit = FitJointSecondOrder(log, truth);
  EXPECT_NEAR(fit.omega_n, truth.NaturalFrequency(), 0.05 * truth.NaturalFrequency());
  EXPECT_NEAR(fit.zeta, truth.DampingRatio(), 0.05 * truth.DampingRatio());
  EXPECT_NEAR(fit.kp, truth.kp, 0.05 * truth.kp);
  EXPECT_NEAR(fit.kd, truth.kd, 0.05 * truth.kd);
  EXPECT_LT(fit.rms_residual, 1e-6);
}

TEST(JointFitTest, UnderdampedStepClosedForm) {
  const double wn = 10.0;
  const double zeta = 0.3;
  const double wd = wn * std::sqrt(1 - zeta * zeta);
  JointResponseLog log;
  for (int k = 0; k < 400; ++k) {
    const double t = k * 0.005;
    log.time.push_back(t);
    log.q_cmd.push_back(0.5);
    log.q_meas.push_back(
        0.5 * (1 - std::exp(-zeta * wn * t) *
                       (std::cos(wd * t) +
                        zeta / std::sqrt(1 - zeta * zeta) * std::sin(wd * t))));
  }
  const JointFit fit = FitJointSecondOrder(log, JointServo());
  EXPECT_NEAR(fit.zeta, zeta, 1e-3);
  EXPECT_NEAR(fit.omega_n, wn, 1e-2);
}

TEST(JointFitTest, RoundTripIsFixedPoint) {
  JointServo truth;
  truth.kp = 0.2;
  truth.kd = 0.004;
  JointResponseLog log = MultiSineLog(truth);
  std::mt19937_64 rng(11);
  for (double& q : log.q_meas) q += 1e-3 * StandardNormal(rng);
  const JointFit first = FitJointSecondOrder(log, truth);
  JointResponseLog again = log;
  again.q_meas = SimulateJointResponse(ServoFromModal(truth, first.omega_n, first.zeta), log);
  const JointFit second = FitJointSecondOrder(again, truth);
  EXPECT_NEAR(second.omega_n, first.omega_n, 0.01 * first.omega_n);
  EXPECT_NEAR(second.zeta, first.zeta, 0.01 * first.zeta);
}

TEST(JointFitTest, ConstantCommandDoesNotConverge) {
  JointResponseLog log;
  for (int k = 0; k < 200; ++k) {
    log.time.push_back(k * 0.005);
    log.q_cmd.push_back(0.1);
    log.q_meas.push_back(0.1);
  }
  try {
    FitJointSecondOrder(log, JointServo());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoConvergence);
    EXPECT_NE(std::string(e.what()).find("best omega_n"), std::string::npos);
  }
}

TEST(JointFitTest, LogValidation) {
  JointResponseLog log = MultiSineLog(JointServo());
  log.time[10] += 0.001;
  EXPECT_THROW(log.SamplePeriod(), Error);
  log.time[10] = log.time[9];
  EXPECT_THROW(log.SamplePeriod(), Error);
  log.q_cmd.pop_back();
  EXPECT_THROW(log.SamplePeriod(), Error);
}

TEST(SysidCsvTest, RoundTripAndErrors) {
  const auto dir = std::filesystem::path(::testing::TempDir());
  const auto samples = SyntheticThrust(20, 0.01, 12);
  WriteThrustCsv(dir / "rotor.csv", samples);
  const auto back = ReadThrustCsv(dir / "rotor.csv");
  ASSERT_EQ(back.size(), samples.size());
  for (size_t k = 0; k < samples.size(); ++k) {
    EXPECT_EQ(back[k].thrust, samples[k].thrust);
    EXPECT_EQ(back[k].voltage, samples[k].voltage);
  }
  const JointResponseLog log = MultiSineLog(JointServo());
  WriteJointCsv(dir / "joint.csv", log);
  EXPECT_EQ(ReadJointCsv(dir / "joint.csv").q_meas, log.q_meas);

  // Columns may come in any order.
  WriteFileAtomic(dir / "swapped.csv", "torque,thrust,voltage,cmd\n0.1,6,24,0.5\n");
  EXPECT_EQ(ReadThrustCsv(dir / "swapped.csv")[0].thrust, 6.0);
  WriteFileAtomic(dir / "bad.csv", "cmd,voltage,thrust,torque\n0.5,24,abc,0\n");
  try {
    ReadThrustCsv(dir / "bad.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("bad.csv:2"), std::string::npos);
  }
  WriteFileAtomic(dir / "nocol.csv", "cmd,voltage,thrust\n0.5,24,1\n");
  EXPECT_THROW(ReadThrustCsv(dir / "nocol.csv"), Error);
}

}  // namespace
}  // namespace tiltrl
