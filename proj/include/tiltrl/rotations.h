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

// Orientation algebra: unit quaternions, Z-Y-X Euler angles, the 6D
// two-column rotation encoding and random orientation sampling.

#ifndef TILTRL_ROTATIONS_H_
#define TILTRL_ROTATIONS_H_

#include <array>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tiltrl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Wraps an angle to (-pi, pi].
double WrapAngle(double angle);

// Unit quaternion with the double cover resolved so that w >= 0.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  // Normalizes the input. Throws kDegenerateInput for a (near) zero norm.
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Eigen::Quaterniond& q);

  static UnitQuaternion Identity() { return UnitQuaternion(); }
  // Rotation of `angle` radians about `axis` (normalized internally).
  static UnitQuaternion FromAxisAngle(const Vec3& axis, double angle);
  static UnitQuaternion FromMatrix(const Mat3& rotation);
  // exp(rotation_vector / 2).
  static UnitQuaternion FromRotationVector(const Vec3& rotation_vector);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }
  const Eigen::Quaterniond& eigen() const { return q_; }

  Mat3 Matrix() const { return q_.toRotationMatrix(); }
  Vec3 Rotate(const Vec3& v) const { return q_ * v; }
  Vec3 InverseRotate(const Vec3& v) const { return q_.conjugate() * v; }
  UnitQuaternion Conjugate() const;
  // Rotation angle in [0, pi].
  double Angle() const;

  UnitQuaternion operator*(const UnitQuaternion& other) const;

  bool operator==(const UnitQuaternion& other) const {
    return q_.coeffs() == other.q_.coeffs();
  }

 private:
  void Canonicalize();

  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

// First two columns of a rotation matrix, column-major:
// (r00, r10, r20, r01, r11, r21).
struct SixDRotation {
  std::array<double, 6> values{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

  Vec3 first() const { return {values[0], values[1], values[2]}; }
  Vec3 second() const { return {values[3], values[4], values[5]}; }
};

// Intrinsic Z-Y-X angles: R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Vec3 AsVector() const { return {roll, pitch, yaw}; }
  EulerAngles Wrapped() const;
};

SixDRotation QuatToSixD(const UnitQuaternion& q);

// Gram-Schmidt decoding of the 6D encoding into a proper rotation matrix.
// Throws kDegenerateInput when a column has norm < 1e-6 or the two columns
// are within 1e-6 of parallel (|cos| > 1 - 1e-6).
Mat3 SixDToMatrix(const SixDRotation& sixd);

// Near |pitch| = pi/2 (within 1e-6) roll is set to zero and the whole
// in-plane angle is assigned to yaw.
EulerAngles QuatToEuler(const UnitQuaternion& q);
UnitQuaternion EulerToQuat(const EulerAngles& euler);

// Componentwise wrapped difference current - desired (radians).
Vec3 EulerError(const EulerAngles& current, const EulerAngles& desired);

// Angle of the relative rotation between a and b, in [0, pi].
double GeodesicDistance(const UnitQuaternion& a, const UnitQuaternion& b);

// Axis uniform on the unit sphere, signed angle uniform in
// [-max_angle, max_angle]. max_angle <= 0 yields the identity.
UnitQuaternion SampleUniformAxisAngle(std::mt19937_64& rng, double max_angle);

// Body z axis expressed in the world frame (third matrix column).
Vec3 BodyZAxis(const UnitQuaternion& q);

}  // namespace tiltrl

#endif  // TILTRL_ROTATIONS_H_
