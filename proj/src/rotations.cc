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

#include "tiltrl/rotations.h"

#include <algorithm>
#include <cmath>

#include "tiltrl/error.h"
#include "tiltrl/random.h"

namespace tiltrl {
namespace {

constexpr double kGimbalTolerance = 1e-6;
constexpr double kDegenerateNorm = 1e-6;
constexpr double kParallelTolerance = 1e-6;

}  // namespace

double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  if (wrapped > kPi) wrapped -= 2.0 * kPi;
  return wrapped;
}

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : q_(w, x, y, z) {
  const double norm = q_.norm();
  if (!(norm > 1e-12) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kDegenerateInput, "quaternion norm is zero");
  }
  q_.coeffs() /= norm;
  Canonicalize();
}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q)
    : UnitQuaternion(q.w(), q.x(), q.y(), q.z()) {}

UnitQuaternion UnitQuaternion::FromAxisAngle(const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 1e-12)) {
    throw Error(ErrorCode::kDegenerateInput, "rotation axis is zero");
  }
  const Vec3 u = axis / norm;
  const double s = std::sin(0.5 * angle);
  return UnitQuaternion(std::cos(0.5 * angle), s * u.x(), s * u.y(),
                        s * u.z());
}

UnitQuaternion UnitQuaternion::FromMatrix(const Mat3& rotation) {
  return UnitQuaternion(Eigen::Quaterniond(rotation));
}

UnitQuaternion UnitQuaternion::FromRotationVector(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle < 1e-12) {
    // First-order expansion keeps tiny increments exact to rounding.
    const Vec3 half = 0.5 * rotation_vector;
    return UnitQuaternion(1.0, half.x(), half.y(), half.z());
  }
  return FromAxisAngle(rotation_vector / angle, angle);
}

UnitQuaternion UnitQuaternion::Conjugate() const {
  UnitQuaternion out;
  out.q_ = q_.conjugate();
  out.Canonicalize();
  return out;
}

double UnitQuaternion::Angle() const {
  const double vec = q_.vec().norm();
  return 2.0 * std::atan2(vec, std::abs(q_.w()));
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& other) const {
  return UnitQuaternion(q_ * other.q_);
}

void UnitQuaternion::Canonicalize() {
  if (q_.w() < 0.0) q_.coeffs() = -q_.coeffs();
}

EulerAngles EulerAngles::Wrapped() const {
  return {WrapAngle(roll), WrapAngle(pitch), WrapAngle(yaw)};
}

SixDRotation QuatToSixD(const UnitQuaternion& q) {
  const Mat3 r = q.Matrix();
  SixDRotation out;
  for (int row = 0; row < 3; ++row) {
    out.values[row] = r(row, 0);
    out.values[3 + row] = r(row, 1);
  }
  return out;
}

Mat3 SixDToMatrix(const SixDRotation& sixd) {
  const Vec3 a = sixd.first();
  const Vec3 b = sixd.second();
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na >= kDegenerateNorm) || !(nb >= kDegenerateNorm)) {
    throw Error(ErrorCode::kDegenerateInput, "6D column norm below 1e-6");
  }
  const Vec3 c1 = a / na;
  if (std::abs(c1.dot(b) / nb) > 1.0 - kParallelTolerance) {
    throw Error(ErrorCode::kDegenerateInput, "6D columns are parallel");
  }
  Vec3 c2 = b - c1.dot(b) * c1;
  c2.normalize();
  Mat3 r;
  r.col(0) = c1;
  r.col(1) = c2;
  r.col(2) = c1.cross(c2);
  return r;
}

EulerAngles QuatToEuler(const UnitQuaternion& q) {
  const Mat3 r = q.Matrix();
  EulerAngles e;
  const double sin_pitch = std::clamp(-r(2, 0), -1.0, 1.0);
  e.pitch = std::asin(sin_pitch);
  if (std::abs(std::abs(e.pitch) - 0.5 * kPi) < kGimbalTolerance) {
    e.pitch = std::copysign(0.5 * kPi, sin_pitch);
    e.roll = 0.0;
    e.yaw = std::atan2(-r(0, 1), r(1, 1));
  } else {
    e.roll = std::atan2(r(2, 1), r(2, 2));
    e.yaw = std::atan2(r(1, 0), r(0, 0));
  }
  return e.Wrapped();
}

UnitQuaternion EulerToQuat(const EulerAngles& euler) {
  const Eigen::Quaterniond q =
      Eigen::AngleAxisd(euler.yaw, Vec3::UnitZ()) *
      Eigen::AngleAxisd(euler.pitch, Vec3::UnitY()) *
      Eigen::AngleAxisd(euler.roll, Vec3::UnitX());
  return UnitQuaternion(q);
}

Vec3 EulerError(const EulerAngles& current, const EulerAngles& desired) {
  return {WrapAngle(current.roll - desired.roll),
          WrapAngle(current.pitch - desired.pitch),
          WrapAngle(current.yaw - desired.yaw)};
}

double GeodesicDistance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return (a.Conjugate() * b).Angle();
}

UnitQuaternion SampleUniformAxisAngle(std::mt19937_64& rng, double max_angle) {
  // Rejection sampling in the unit ball gives a direction uniform on the
  // sphere and, unlike std::normal_distribution, the same draws everywhere.
  Vec3 axis;
  double norm_sq = 0.0;
  do {
    axis = Vec3(UniformRange(rng, -1.0, 1.0), UniformRange(rng, -1.0, 1.0),
                UniformRange(rng, -1.0, 1.0));
    norm_sq = axis.squaredNorm();
  } while (norm_sq > 1.0 || norm_sq < 1e-12);
  if (!(max_angle > 0.0)) return UnitQuaternion::Identity();
  return UnitQuaternion::FromAxisAngle(axis,
                                       UniformRange(rng, -max_angle, max_angle));
}

Vec3 BodyZAxis(const UnitQuaternion& q) { return q.Rotate(Vec3::UnitZ()); }

}  // namespace tiltrl
