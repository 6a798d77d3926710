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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "tiltrl/checkpoint.h"
#include "tiltrl/error.h"

namespace tiltrl {
namespace {

int NumCoefficients(int degree_cmd, int degree_voltage) {
  return (degree_cmd + 1) * (degree_voltage + 1);
}

void FillBasis(double cmd, double voltage, int degree_cmd, int degree_voltage,
               double* out) {
  double vp = 1.0;
  int k = 0;
  for (int j = 0; j <= degree_voltage; ++j) {
    double cp = 1.0;
    for (int i = 0; i <= degree_cmd; ++i) {
      out[k++] = cp * vp;
      cp *= cmd;
    }
    vp *= voltage;
  }
}

double SumSquares(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

// Parses a numeric CSV with a header into named columns.
std::map<std::string, std::vector<double>> ReadColumns(
    const std::filesystem::path& path, const std::vector<std::string>& names) {
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_number = 0;
  std::vector<int> index(names.size(), -1);
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> header = SplitCsv(line);
    for (size_t n = 0; n < names.size(); ++n) {
      const auto it = std::find(header.begin(), header.end(), names[n]);
      if (it == header.end()) {
        throw Error(ErrorCode::kParse,
                    path.string() + ": missing column '" + names[n] + "'");
      }
      index[n] = static_cast<int>(it - header.begin());
    }
    break;
  }
  if (index.empty() || index[0] < 0) {
    throw Error(ErrorCode::kParse, path.string() + ": missing header");
  }
  std::map<std::string, std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = SplitCsv(line);
    for (size_t n = 0; n < names.size(); ++n) {
      const int i = index[n];
      double value = 0.0;
      size_t used = 0;
      try {
        if (i >= static_cast<int>(fields.size())) throw std::invalid_argument("");
        value = std::stod(fields[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[i].size()) {
        throw Error(ErrorCode::kParse, path.string() + ":" +
                                           std::to_string(line_number) +
                                           ": bad value for '" + names[n] + "'");
      }
      columns[names[n]].push_back(value);
    }
  }
  return columns;
}

}  // namespace

double RotorFit::Evaluate(double cmd, double voltage) const {
  std::vector<double> basis(coefficients.size());
  FillBasis(cmd, voltage, degree_cmd, degree_voltage, basis.data());
  double f = 0.0;
  for (size_t k = 0; k < basis.size(); ++k) f += coefficients[k] * basis[k];
  return f;
}

bool RotorFit::monotone() const {
  return std::all_of(monotone_at_voltage.begin(), monotone_at_voltage.end(),
                     [](bool b) { return b; });
}

RotorModel RotorFit::ToRotorModel(const RotorModel& base) const {
  if (degree_cmd != 2 || degree_voltage != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "rotor config requires degrees (2, 1), got (" +
                    std::to_string(degree_cmd) + ", " +
                    std::to_string(degree_voltage) + ")");
  }
  RotorModel model = base;
  std::copy(coefficients.begin(), coefficients.end(),
            model.coefficients.begin());
  model.cmd_min = cmd_min;
  model.cmd_max = cmd_max;
  model.voltage_min = voltage_min;
  model.voltage_max = voltage_max;
  return model;
}

RotorFit FitRotorPolynomial(const std::vector<ThrustSample>& samples,
                            int degree_cmd, int degree_voltage) {
  if (degree_cmd < 1 || degree_voltage < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid polynomial degrees");
  }
  const int p = NumCoefficients(degree_cmd, degree_voltage);
  const int n = static_cast<int>(samples.size());
  if (n < 3 * p) {
    throw Error(ErrorCode::kInsufficientData,
                "rotor fit needs at least " + std::to_string(3 * p) +
                    " samples, got " + std::to_string(n));
  }
  RotorFit fit;
  fit.degree_cmd = degree_cmd;
  fit.degree_voltage = degree_voltage;
  fit.cmd_min = fit.voltage_min = std::numeric_limits<double>::infinity();
  fit.cmd_max = fit.voltage_max = -std::numeric_limits<double>::infinity();

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    const ThrustSample& s = samples[r];
    if (!std::isfinite(s.cmd) || !std::isfinite(s.voltage) ||
        !std::isfinite(s.thrust) || !(s.thrust >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid thrust sample at row " + std::to_string(r));
    }
    std::vector<double> basis(p);
    FillBasis(s.cmd, s.voltage, degree_cmd, degree_voltage, basis.data());
    for (int c = 0; c < p; ++c) x(r, c) = basis[c];
    y[r] = s.thrust;
    fit.cmd_min = std::min(fit.cmd_min, s.cmd);
    fit.cmd_max = std::max(fit.cmd_max, s.cmd);
    fit.voltage_min = std::min(fit.voltage_min, s.voltage);
    fit.voltage_max = std::max(fit.voltage_max, s.voltage);
  }

  // Unit-norm columns keep the rank decision independent of units.
  const Eigen::VectorXd scale = x.colwise().norm().transpose();
  for (int c = 0; c < p; ++c) x.col(c) /= scale[c] > 0.0 ? scale[c] : 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    throw Error(ErrorCode::kRankDeficient,
                "rotor design matrix has rank " + std::to_string(qr.rank()) +
                    " < " + std::to_string(p));
  }
  const Eigen::VectorXd b = qr.solve(y);
  fit.coefficients.resize(p);
  for (int c = 0; c < p; ++c) fit.coefficients[c] = b[c] / scale[c];
  fit.rms_residual = RotorResidualRms(fit, samples);

  // Monotonicity at each logged voltage level, or on a grid when the log
  // sweeps voltage continuously.
  std::vector<double> levels;
  for (const auto& s : samples) levels.push_back(s.voltage);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-9;
                           }),
               levels.end());
  if (levels.size() > 16) {
    levels.clear();
    for (int k = 0; k < 9; ++k) {
      levels.push_back(fit.voltage_min +
                       (fit.voltage_max - fit.voltage_min) * k / 8.0);
    }
  }
  constexpr int kGrid = 64;
  for (double v : levels) {
    bool ok = true;
    double previous = fit.Evaluate(fit.cmd_min, v);
    for (int k = 1; k <= kGrid; ++k) {
      const double c = fit.cmd_min + (fit.cmd_max - fit.cmd_min) * k / kGrid;
      const double f = fit.Evaluate(c, v);
      if (f < previous) ok = false;
      previous = f;
    }
    fit.checked_voltages.push_back(v);
    fit.monotone_at_voltage.push_back(ok);
  }
  return fit;
}

double RotorResidualRms(const RotorFit& fit,
                        const std::vector<ThrustSample>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) {
    const double r = s.thrust - fit.Evaluate(s.cmd, s.voltage);
    sum += r * r;
  }
  return std::sqrt(sum / samples.size());
}

double FitTorqueRatio(const std::vector<ThrustSample>& samples) {
  // Extended-precision sums so exactly proportional data returns the ratio
  // itself rather than a neighbor one ulp away.
  long double ff = 0.0L;
  long double ft = 0.0L;
  int used = 0;
  for (const auto& s : samples) {
    if (s.thrust == 0.0) continue;
    ff += static_cast<long double>(s.thrust) * s.thrust;
    ft += static_cast<long double>(s.thrust) * s.torque;
    ++used;
  }
  if (used < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "torque ratio needs at least 2 samples with nonzero thrust");
  }
  return static_cast<double>(ft / ff);
}

double JointResponseLog::SamplePeriod() const {
  if (q_cmd.size() != time.size() || q_meas.size() != time.size()) {
    throw Error(ErrorCode::kInvalidArgument, "joint log column lengths differ");
  }
  if (time.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "joint log needs 3 samples");
  }
  const double dt = (time.back() - time.front()) / (time.size() - 1);
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "joint log time not increasing");
  }
  for (size_t k = 1; k < time.size(); ++k) {
    const double step = time[k] - time[k - 1];
    if (!(step > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "joint log time not monotone at row " + std::to_string(k));
    }
    if (std::abs(step - dt) > 1e-6 * dt + 1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "joint log not uniformly sampled at row " + std::to_string(k));
    }
  }
  return dt;
}

JointServo ServoFromModal(const JointServo& base, double omega_n, double zeta) {
  JointServo servo = base;
  servo.kp = base.inertia * omega_n * omega_n;
  servo.kd = 2.0 * base.inertia * zeta * omega_n;
  return servo;
}

std::vector<double> SimulateJointResponse(const JointServo& servo,
                                          const JointResponseLog& log) {
  const double dt = log.SamplePeriod();
  std::vector<double> q(log.size());
  JointState state{log.q_meas[0], 0.0};
  q[0] = state.position;
  for (size_t k = 1; k < log.size(); ++k) {
    state = JointStep(servo, state, log.q_cmd[k - 1], dt).state;
    q[k] = state.position;
  }
  return q;
}

JointFit FitJointSecondOrder(const JointResponseLog& log,
                             const JointServo& base,
                             const JointFitOptions& options) {
  log.SamplePeriod();
  if (!(base.inertia > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "joint inertia must be positive");
  }
  // Parameters are (log omega_n, log zeta), which keeps both positive.
  auto cost = [&](double lw, double lz) {
    return SumSquares(
        SimulateJointResponse(ServoFromModal(base, std::exp(lw), std::exp(lz)),
                              log),
        log.q_meas);
  };
  auto no_convergence = [&](const std::string& why, double lw, double lz,
                            double c) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer),
                  "%s; best omega_n %.6g zeta %.6g rms %.3g", why.c_str(),
                  std::exp(lw), std::exp(lz), std::sqrt(c / log.size()));
    return Error(ErrorCode::kNoConvergence, buffer);
  };

  const auto [cmd_lo, cmd_hi] = std::minmax_element(log.q_cmd.begin(), log.q_cmd.end());
  const auto [meas_lo, meas_hi] =
      std::minmax_element(log.q_meas.begin(), log.q_meas.end());
  const double excitation = std::max(*cmd_hi - *cmd_lo, *meas_hi - *meas_lo);

  double best_lw = 0.0;
  double best_lz = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const double lw0 = std::log(options.omega_min);
  const double lw1 = std::log(options.omega_max);
  const double lz0 = std::log(options.zeta_min);
  const double lz1 = std::log(options.zeta_max);
  for (int i = 0; i < options.grid_omega; ++i) {
    const double lw = lw0 + (lw1 - lw0) * i / std::max(1, options.grid_omega - 1);
    for (int j = 0; j < options.grid_zeta; ++j) {
      const double lz = lz0 + (lz1 - lz0) * j / std::max(1, options.grid_zeta - 1);
      const double c = cost(lw, lz);
      if (c < best) {
        best = c;
        best_lw = lw;
        best_lz = lz;
      }
    }
  }
  if (!(excitation > 1e-9)) {
    throw no_convergence("joint log has no excitation", best_lw, best_lz, best);
  }

  std::vector<double> residual(log.size());
  const int m = static_cast<int>(log.size());
  auto residuals = [&](double lw, double lz) {
    const std::vector<double> q = SimulateJointResponse(
        ServoFromModal(base, std::exp(lw), std::exp(lz)), log);
    Eigen::VectorXd r(m);
    for (int k = 0; k < m; ++k) r[k] = q[k] - log.q_meas[k];
    return r;
  };

  JointFit fit;
  bool converged = false;
  int iteration = 0;
  for (; iteration < options.max_iterations && !converged; ++iteration) {
    const Eigen::VectorXd r = residuals(best_lw, best_lz);
    constexpr double kH = 1e-6;
    Eigen::MatrixXd jac(m, 2);
    jac.col(0) = (residuals(best_lw + kH, best_lz) -
                  residuals(best_lw - kH, best_lz)) / (2 * kH);
    jac.col(1) = (residuals(best_lw, best_lz + kH) -
                  residuals(best_lw, best_lz - kH)) / (2 * kH);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(1e-12);
    if (qr.rank() < 2) {
      throw no_convergence("singular Gauss-Newton Jacobian", best_lw, best_lz,
                           best);
    }
    const Eigen::Vector2d step = -qr.solve(r);
    // Step halving until the cost does not increase.
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      const double lw = best_lw + t * step[0];
      const double lz = best_lz + t * step[1];
      const double c = cost(lw, lz);
      if (c <= best) {
        const double relative_change = best > 0.0 ? (best - c) / best : 0.0;
        best = c;
        best_lw = lw;
        best_lz = lz;
        accepted = true;
        if ((t * step).norm() < options.tolerance || relative_change < 1e-14) {
          converged = true;
        }
        break;
      }
    }
    // No descent along the Gauss-Newton direction: at a minimum up to
    // rounding.
    if (!accepted) converged = true;
  }
  if (!converged) {
    throw no_convergence("iteration limit reached", best_lw, best_lz, best);
  }
  fit.omega_n = std::exp(best_lw);
  fit.zeta = std::exp(best_lz);
  const JointServo servo = ServoFromModal(base, fit.omega_n, fit.zeta);
  fit.kp = servo.kp;
  fit.kd = servo.kd;
  fit.rms_residual = std::sqrt(best / m);
  fit.iterations = iteration;
  return fit;
}

std::vector<ThrustSample> ReadThrustCsv(const std::filesystem::path& path) {
  auto columns = ReadColumns(path, {"cmd", "voltage", "thrust", "torque"});
  std::vector<ThrustSample> samples(columns["cmd"].size());
  for (size_t k = 0; k < samples.size(); ++k) {
    samples[k] = {columns["cmd"][k], columns["voltage"][k],
                  columns["thrust"][k], columns["torque"][k]};
  }
  return samples;
}

JointResponseLog ReadJointCsv(const std::filesystem::path& path) {
  auto columns = ReadColumns(path, {"t", "q_cmd", "q_meas"});
  JointResponseLog log;
  log.time = std::move(columns["t"]);
  log.q_cmd = std::move(columns["q_cmd"]);
  log.q_meas = std::move(columns["q_meas"]);
  return log;
}

void WriteThrustCsv(const std::filesystem::path& path,
                    const std::vector<ThrustSample>& samples) {
  std::string text = "cmd,voltage,thrust,torque\n";
  for (const auto& s : samples) {
    text += FormatDouble(s.cmd) + "," + FormatDouble(s.voltage) + "," +
            FormatDouble(s.thrust) + "," + FormatDouble(s.torque) + "\n";
  }
  WriteFileAtomic(path, text);
}

void WriteJointCsv(const std::filesystem::path& path,
                   const JointResponseLog& log) {
  log.SamplePeriod();
  std::string text = "t,q_cmd,q_meas\n";
  for (size_t k = 0; k < log.size(); ++k) {
    text += FormatDouble(log.time[k]) + "," + FormatDouble(log.q_cmd[k]) + "," +
            FormatDouble(log.q_meas[k]) + "\n";
  }
  WriteFileAtomic(path, text);
}

}  // namespace tiltrl
